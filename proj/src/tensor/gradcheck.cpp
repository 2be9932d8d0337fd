#include "mvt/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace mvt {

GradCheckReport check_gradients(const LossFn& loss_fn, const std::vector<NamedParam>& params,
                                const GradCheckOptions& options) {
    for (const auto& p : params) {
        p.tensor->set_requires_grad(true);
        p.tensor->ensure_grad();
        p.tensor->zero_grad();
    }
    {
        GradGraph<double> graph(true);
        auto loss = loss_fn(graph);
        graph.backward(loss);
    }

    auto evaluate = [&] {
        GradGraph<double> graph(false);
        return (*loss_fn(graph))[0];
    };

    GradCheckReport report;
    for (const auto& p : params) {
        ParamGradCheck entry;
        entry.name = p.name;
        Tensor<double>& t = *p.tensor;
        const std::vector<double> analytic(t.grad().begin(), t.grad().end());
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double saved = t[i];
            t[i] = saved + options.epsilon;
            const double up = evaluate();
            t[i] = saved - options.epsilon;
            const double down = evaluate();
            t[i] = saved;
            const double numeric = (up - down) / (2.0 * options.epsilon);
            const double denom = std::max({std::abs(analytic[i]), std::abs(numeric),
                                           options.magnitude_floor});
            const double rel = std::abs(analytic[i] - numeric) / denom;
            if (i == 0 || rel > entry.max_rel_error) {
                entry.max_rel_error = rel;
                entry.worst_index = i;
                entry.analytic = analytic[i];
                entry.numeric = numeric;
            }
        }
        report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
        report.params.push_back(std::move(entry));
    }
    report.passed = report.max_rel_error < options.tolerance;
    return report;
}

}  // namespace mvt
