#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mvt/grad_graph.hpp"

namespace mvt {

struct NamedParam {
    std::string name;
    TensorPtr<double> tensor;
};

struct GradCheckOptions {
    double epsilon = 1e-4;
    double tolerance = 1e-4;
    // Denominator floor of the relative error, so entries whose true
    // gradient is ~0 are judged on absolute error at this scale.
    double magnitude_floor = 1e-6;
};

struct ParamGradCheck {
    std::string name;
    std::size_t worst_index = 0;
    double max_rel_error = 0.0;
    double analytic = 0.0;
    double numeric = 0.0;
};

struct GradCheckReport {
    std::vector<ParamGradCheck> params;
    double max_rel_error = 0.0;
    bool passed = true;
};

using LossFn = std::function<TensorPtr<double>(GradGraph<double>&)>;

// Compares reverse-mode gradients of loss_fn against central differences for
// every element of every parameter. loss_fn must be deterministic and build
// its graph from the supplied GradGraph (which is non-recording during the
// finite-difference evaluations).
GradCheckReport check_gradients(const LossFn& loss_fn, const std::vector<NamedParam>& params,
                                const GradCheckOptions& options = {});

}  // namespace mvt
