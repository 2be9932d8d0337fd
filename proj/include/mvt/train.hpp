#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mvt/adam.hpp"
#include "mvt/cube.hpp"
#include "mvt/metrics.hpp"
#include "mvt/model.hpp"
#include "mvt/mpca.hpp"
#include "mvt/split.hpp"

namespace mvt {

struct TrainConfig {
    std::size_t epochs = 300;
    std::size_t batch_size = 64;
    AdamConfig adam;
    std::uint64_t seed = 0;
    SplitFractions fractions;
};

struct EpochRecord {
    std::size_t epoch = 0;    // 1-based
    double train_loss = 0.0;  // mean per-sample loss over the epoch
    double val_oa = 0.0;
};

nlohmann::ordered_json to_json(const EpochRecord& record);

struct TrainResult {
    ModelParams<float> params;  // parameters at the best validation epoch
    SplitAssignment split;
    std::vector<EpochRecord> history;
    std::size_t best_epoch = 0;
    double best_val_oa = 0.0;
};

using EpochObserver = std::function<void(const EpochRecord&)>;

// MMNorm followed by MPCA (or plain PCA to g * d channels when use_mpca is off).
MpcaResult preprocess(const HsiCube& raw, const ModelConfig& config);

// Seeded stratified split, per-epoch shuffle, mini-batch Adam on softmax
// cross-entropy; keeps the parameters of the epoch with the best validation
// OA (the final epoch if the validation split is empty).
TrainResult train(const Raster<float>& representation, const LabelMap& labels,
                  const ModelConfig& model_config, const TrainConfig& train_config,
                  const EpochObserver& observer = {});

// Same loop with an explicit split and starting parameters (copied).
TrainResult train_with_split(const Raster<float>& representation, const LabelMap& labels,
                             const SplitAssignment& split, const ModelConfig& model_config,
                             const TrainConfig& train_config, const ModelParams<float>& initial,
                             const EpochObserver& observer = {});

// Predicts every listed pixel (row-major indices into the label raster).
// With rotate set, every patch is rotated 180 degrees first.
std::vector<std::int32_t> predict_pixels(const Raster<float>& representation,
                                         const ModelConfig& config,
                                         const ModelParams<float>& params,
                                         std::span<const std::size_t> pixels, bool rotate = false);

MetricsReport evaluate(const Raster<float>& representation, const LabelMap& labels,
                       const ModelConfig& config, const ModelParams<float>& params,
                       std::span<const std::size_t> pixels, bool rotate = false);

struct RotationAudit {
    MetricsReport original;
    MetricsReport rotated;
    double delta_oa = 0.0;  // original - rotated
    double delta_aa = 0.0;
};

nlohmann::ordered_json to_json(const RotationAudit& audit);

RotationAudit rotation_audit(const Raster<float>& representation, const LabelMap& labels,
                             const ModelConfig& config, const ModelParams<float>& params,
                             std::span<const std::size_t> pixels);

struct ExperimentResult {
    TrainResult training;
    MetricsReport test;
};

// preprocess -> train -> evaluate on the test split.
ExperimentResult run_experiment(const HsiCube& raw, const LabelMap& labels,
                                const ModelConfig& model_config, const TrainConfig& train_config,
                                const EpochObserver& observer = {});

enum class SweepAxis { patch_size, views, components, heads, train_fraction };

SweepAxis parse_sweep_axis(const std::string& name);
std::string to_string(SweepAxis axis);

struct SweepRow {
    SweepAxis axis;
    double value = 0.0;
    MetricsReport test;
};

// One experiment per value, varying only `axis` from the base configuration.
// Heads keep K3 fixed and set the head dimension to K3 / heads.
std::vector<SweepRow> sweep(const HsiCube& raw, const LabelMap& labels, const ModelConfig& base_model,
                            const TrainConfig& base_train, SweepAxis axis,
                            const std::vector<double>& values);

// CSV with header axis,value,oa,aa,test_pixels,runtime_seconds.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace mvt
