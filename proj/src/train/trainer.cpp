#include <algorithm>
#include <chrono>
#include <cmath>

#include "mvt/patch.hpp"
#include "mvt/rng.hpp"
#include "mvt/train.hpp"

namespace mvt {

nlohmann::ordered_json to_json(const EpochRecord& record) {
    nlohmann::ordered_json j;
    j["epoch"] = record.epoch;
    j["train_loss"] = record.train_loss;
    j["val_oa"] = record.val_oa;
    return j;
}

MpcaResult preprocess(const HsiCube& raw, const ModelConfig& config) {
    const HsiCube normalized = mmnorm(raw);
    if (config.use_mpca) {
        return mpca(normalized, config.num_views, config.view_components);
    }
    return plain_pca(normalized, config.in_channels());
}

namespace {

void check_inputs(const Raster<float>& representation, const LabelMap& labels,
                  const ModelConfig& config) {
    config.validate();
    require(representation.height == labels.height && representation.width == labels.width,
            ErrorKind::dimension, "representation and label rasters differ in size");
    require(representation.channels == config.in_channels(), ErrorKind::dimension,
            "representation has " + std::to_string(representation.channels) +
                " channels, model expects " + std::to_string(config.in_channels()));
    require(config.num_classes == labels.classes, ErrorKind::config,
            "model class count " + std::to_string(config.num_classes) + " differs from labels (" +
                std::to_string(labels.classes) + ")");
}

TensorPtr<float> patch_tensor(const Raster<float>& source, std::size_t pixel, std::size_t size,
                              bool rotate) {
    Patch patch = extract_patch(source, pixel / source.width, pixel % source.width, size);
    if (rotate) patch = rotate180(patch);
    return make_tensor(std::move(patch.values));
}

double accuracy(const Raster<float>& representation, const LabelMap& labels,
                const ModelConfig& config, const ModelParams<float>& params,
                std::span<const std::size_t> pixels) {
    if (pixels.empty()) return 0.0;
    const auto predicted = predict_pixels(representation, config, params, pixels);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        if (predicted[i] == labels.ids[pixels[i]]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(pixels.size());
}

}  // namespace

std::vector<std::int32_t> predict_pixels(const Raster<float>& representation,
                                         const ModelConfig& config,
                                         const ModelParams<float>& params,
                                         std::span<const std::size_t> pixels, bool rotate) {
    std::vector<std::int32_t> out;
    out.reserve(pixels.size());
    for (std::size_t pixel : pixels) {
        GradGraph<float> graph(false);
        auto logits = forward(graph, config, params,
                              patch_tensor(representation, pixel, config.patch_size, rotate));
        out.push_back(predict_class<float>(logits->values()));
    }
    return out;
}

MetricsReport evaluate(const Raster<float>& representation, const LabelMap& labels,
                       const ModelConfig& config, const ModelParams<float>& params,
                       std::span<const std::size_t> pixels, bool rotate) {
    check_inputs(representation, labels, config);
    const auto start = std::chrono::steady_clock::now();
    const auto predicted = predict_pixels(representation, config, params, pixels, rotate);
    std::vector<std::int32_t> truth;
    truth.reserve(pixels.size());
    for (std::size_t pixel : pixels) truth.push_back(labels.ids[pixel]);
    MetricsReport report = compute_metrics(truth, predicted, labels.classes);
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

TrainResult train(const Raster<float>& representation, const LabelMap& labels,
                  const ModelConfig& model_config, const TrainConfig& train_config,
                  const EpochObserver& observer) {
    check_inputs(representation, labels, model_config);
    const SplitAssignment split = stratified_split(labels, train_config.fractions, train_config.seed);
    const auto initial = init_params<float>(model_config, train_config.seed);
    return train_with_split(representation, labels, split, model_config, train_config, initial,
                            observer);
}

TrainResult train_with_split(const Raster<float>& representation, const LabelMap& labels,
                             const SplitAssignment& split, const ModelConfig& model_config,
                             const TrainConfig& train_config, const ModelParams<float>& initial,
                             const EpochObserver& observer) {
    check_inputs(representation, labels, model_config);
    require(train_config.batch_size >= 1, ErrorKind::config, "batch size must be positive");
    require(split.assignment.size() == labels.ids.size(), ErrorKind::dimension,
            "split does not cover the label raster");
    std::vector<std::size_t> order = split.indices(Split::train);
    const std::vector<std::size_t> val = split.indices(Split::val);
    require(!order.empty(), ErrorKind::config, "training split is empty");

    TrainResult result;
    result.split = split;
    ModelParams<float> params = initial.clone();
    std::vector<TensorPtr<float>> tensors;
    for (const auto& [name, t] : params.named()) tensors.push_back(t);
    Adam<float> optimizer(tensors, train_config.adam);
    auto shuffle_rng = make_rng(train_config.seed, RngStream::shuffle);

    result.params = params.clone();
    bool have_best = false;
    for (std::size_t epoch = 1; epoch <= train_config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += train_config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + train_config.batch_size);
            const float inv_batch = 1.0f / static_cast<float>(stop - start);
            optimizer.zero_grad();
            for (std::size_t i = start; i < stop; ++i) {
                const std::size_t pixel = order[i];
                GradGraph<float> graph(true);
                auto logits = forward(graph, model_config, params,
                                      patch_tensor(representation, pixel, model_config.patch_size, false));
                auto loss = graph.cross_entropy(logits, {static_cast<std::int32_t>(labels.ids[pixel])});
                loss_sum += static_cast<double>((*loss)[0]);
                graph.backward(graph.scale(loss, inv_batch));
            }
            optimizer.step();
        }

        EpochRecord record;
        record.epoch = epoch;
        record.train_loss = loss_sum / static_cast<double>(order.size());
        record.val_oa = accuracy(representation, labels, model_config, params, val);
        result.history.push_back(record);
        if (observer) observer(record);

        const bool improved = val.empty() || !have_best || record.val_oa > result.best_val_oa;
        if (improved) {
            have_best = true;
            result.best_epoch = epoch;
            result.best_val_oa = record.val_oa;
            result.params = params.clone();
        }
    }
    for (const auto& [name, t] : result.params.named()) t->drop_grad();
    return result;
}

ExperimentResult run_experiment(const HsiCube& raw, const LabelMap& labels,
                                const ModelConfig& model_config, const TrainConfig& train_config,
                                const EpochObserver& observer) {
    const MpcaResult reduced = preprocess(raw, model_config);
    const Raster<float>& rep = reduced.representation.raster;
    ExperimentResult result;
    result.training = train(rep, labels, model_config, train_config, observer);
    const auto test = result.training.split.indices(Split::test);
    result.test = evaluate(rep, labels, model_config, result.training.params, test);
    return result;
}

}  // namespace mvt
