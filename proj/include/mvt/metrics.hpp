#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

namespace mvt {

// Confusion matrix with rows = true class, columns = predicted class
// (both 1-based ids stored at index id - 1).
struct MetricsReport {
    std::size_t num_classes = 0;
    std::vector<std::size_t> confusion;
    std::vector<std::size_t> class_totals;
    std::vector<std::optional<double>> per_class_accuracy;  // empty for classes absent from the set
    std::size_t total = 0;
    double overall_accuracy = 0.0;
    double average_accuracy = 0.0;
    double runtime_seconds = 0.0;

    std::size_t at(std::int32_t truth, std::int32_t predicted) const {
        return confusion[static_cast<std::size_t>(truth - 1) * num_classes +
                         static_cast<std::size_t>(predicted - 1)];
    }
};

// OA = trace / total; AA = mean recall over classes with at least one sample.
MetricsReport compute_metrics(std::span<const std::int32_t> truth,
                              std::span<const std::int32_t> predicted, std::size_t num_classes);

// Runtime is wall-clock and therefore left out unless asked for, so the
// default serialization is reproducible.
nlohmann::ordered_json to_json(const MetricsReport& report, bool include_runtime = false);

}  // namespace mvt
