#include "mvt/metrics.hpp"

#include "mvt/error.hpp"

namespace mvt {

MetricsReport compute_metrics(std::span<const std::int32_t> truth,
                              std::span<const std::int32_t> predicted, std::size_t num_classes) {
    require(truth.size() == predicted.size(), ErrorKind::dimension,
            "truth and prediction counts differ");
    MetricsReport r;
    r.num_classes = num_classes;
    r.confusion.assign(num_classes * num_classes, 0);
    r.class_totals.assign(num_classes, 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto t = truth[i], p = predicted[i];
        require(t >= 1 && static_cast<std::size_t>(t) <= num_classes && p >= 1 &&
                    static_cast<std::size_t>(p) <= num_classes,
                ErrorKind::range, "class id outside 1.." + std::to_string(num_classes));
        ++r.confusion[static_cast<std::size_t>(t - 1) * num_classes + static_cast<std::size_t>(p - 1)];
        ++r.class_totals[static_cast<std::size_t>(t - 1)];
    }
    r.total = truth.size();

    std::size_t correct = 0;
    double recall_sum = 0.0;
    std::size_t present = 0;
    r.per_class_accuracy.assign(num_classes, std::nullopt);
    for (std::size_t c = 0; c < num_classes; ++c) {
        const std::size_t hits = r.confusion[c * num_classes + c];
        correct += hits;
        if (r.class_totals[c] > 0) {
            const double recall = static_cast<double>(hits) / static_cast<double>(r.class_totals[c]);
            r.per_class_accuracy[c] = recall;
            recall_sum += recall;
            ++present;
        }
    }
    r.overall_accuracy = r.total > 0 ? static_cast<double>(correct) / static_cast<double>(r.total) : 0.0;
    r.average_accuracy = present > 0 ? recall_sum / static_cast<double>(present) : 0.0;
    return r;
}

nlohmann::ordered_json to_json(const MetricsReport& r, bool include_runtime) {
    nlohmann::ordered_json j;
    j["oa"] = r.overall_accuracy;
    j["aa"] = r.average_accuracy;
    j["total"] = r.total;
    auto per_class = nlohmann::ordered_json::array();
    for (const auto& acc : r.per_class_accuracy) {
        per_class.push_back(acc ? nlohmann::ordered_json(*acc) : nlohmann::ordered_json(nullptr));
    }
    j["per_class_accuracy"] = std::move(per_class);
    j["class_totals"] = r.class_totals;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t t = 0; t < r.num_classes; ++t) {
        rows.push_back(std::vector<std::size_t>(r.confusion.begin() + static_cast<std::ptrdiff_t>(t * r.num_classes),
                                                r.confusion.begin() + static_cast<std::ptrdiff_t>((t + 1) * r.num_classes)));
    }
    j["confusion"] = std::move(rows);
    if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
    return j;
}

}  // namespace mvt
