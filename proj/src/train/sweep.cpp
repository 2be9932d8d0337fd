#include <cmath>
#include <ostream>

#include "mvt/train.hpp"

namespace mvt {

SweepAxis parse_sweep_axis(const std::string& name) {
    if (name == "patch_size") return SweepAxis::patch_size;
    if (name == "views") return SweepAxis::views;
    if (name == "components") return SweepAxis::components;
    if (name == "heads") return SweepAxis::heads;
    if (name == "train_fraction") return SweepAxis::train_fraction;
    fail(ErrorKind::config, "unknown sweep axis '" + name +
                                "' (expected patch_size, views, components, heads, train_fraction)");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::patch_size: return "patch_size";
        case SweepAxis::views: return "views";
        case SweepAxis::components: return "components";
        case SweepAxis::heads: return "heads";
        case SweepAxis::train_fraction: return "train_fraction";
    }
    return "unknown";
}

namespace {

std::size_t as_count(double value, SweepAxis axis) {
    require(value >= 1 && std::floor(value) == value, ErrorKind::config,
            to_string(axis) + " values must be positive integers");
    return static_cast<std::size_t>(value);
}

}  // namespace

std::vector<SweepRow> sweep(const HsiCube& raw, const LabelMap& labels, const ModelConfig& base_model,
                            const TrainConfig& base_train, SweepAxis axis,
                            const std::vector<double>& values) {
    std::vector<SweepRow> rows;
    for (double value : values) {
        ModelConfig model = base_model;
        TrainConfig train_cfg = base_train;
        switch (axis) {
            case SweepAxis::patch_size: model.patch_size = as_count(value, axis); break;
            case SweepAxis::views: model.num_views = as_count(value, axis); break;
            case SweepAxis::components: model.view_components = as_count(value, axis); break;
            case SweepAxis::heads: model.heads = as_count(value, axis); break;
            case SweepAxis::train_fraction: {
                const double fraction = value > 1.0 ? value / 100.0 : value;
                require(fraction > 0 && fraction + train_cfg.fractions.val < 1.0, ErrorKind::config,
                        "training fraction out of range");
                train_cfg.fractions.train = fraction;
                train_cfg.fractions.test = 1.0 - fraction - train_cfg.fractions.val;
                break;
            }
        }
        ExperimentResult result = run_experiment(raw, labels, model, train_cfg);
        rows.push_back(SweepRow{axis, value, std::move(result.test)});
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "axis,value,oa,aa,test_pixels,runtime_seconds\n";
    for (const auto& row : rows) {
        out << to_string(row.axis) << ',' << row.value << ',' << row.test.overall_accuracy << ','
            << row.test.average_accuracy << ',' << row.test.total << ','
            << row.test.runtime_seconds << '\n';
    }
}

}  // namespace mvt
