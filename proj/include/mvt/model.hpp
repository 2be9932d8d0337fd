#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mvt/grad_graph.hpp"

namespace mvt {

struct ModelConfig {
    std::size_t patch_size = 5;
    std::size_t num_views = 10;        // g
    std::size_t view_components = 3;   // d per view
    std::size_t conv3d_kernels = 8;    // K1
    std::size_t conv3d_extent = 3;     // cubic 3D kernel edge
    std::size_t mid_channels = 40;     // K2
    std::size_t feature_channels = 64; // K3
    std::size_t conv2d_extent = 3;
    std::size_t heads = 8;
    std::size_t feature_dim = 64;      // j
    std::size_t num_classes = 0;
    bool use_mpca = true;
    bool use_sed = true;
    bool use_global_token = true;

    std::size_t in_channels() const noexcept { return num_views * view_components; }
    std::size_t head_dim() const noexcept { return heads == 0 ? 0 : feature_channels / heads; }
    std::size_t pooled_size() const noexcept { return (patch_size + 1) / 2; }

    // Throws config error on an even patch or kernel size, K3 not divisible
    // by the head count, or a SED that is not U-shaped (K1 C > K2 < K3).
    void validate() const;

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

nlohmann::ordered_json to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& j);

// Throws compatibility error naming the first differing field.
void check_compatible(const ModelConfig& expected, const ModelConfig& actual);

template <typename T>
struct HeadParams {
    TensorPtr<T> query;  // K3 x d
    TensorPtr<T> key;
    TensorPtr<T> value;
};

// Learnable weights. SED tensors are present iff use_sed; the single stem
// convolution replaces them otherwise. global_token is present iff
// use_global_token.
template <typename T>
struct ModelParams {
    TensorPtr<T> conv3d_kernels;  // K1 x k x k x k
    TensorPtr<T> conv3d_bias;     // K1
    TensorPtr<T> mid_kernels;     // K2 x k x k x (K1 C)
    TensorPtr<T> mid_bias;
    TensorPtr<T> out_kernels;     // K3 x k x k x K2
    TensorPtr<T> out_bias;
    TensorPtr<T> stem_kernels;    // K3 x k x k x C
    TensorPtr<T> stem_bias;
    TensorPtr<T> global_token;    // K3
    std::vector<HeadParams<T>> heads;
    TensorPtr<T> feature_weight;  // 5 K3 x j
    TensorPtr<T> feature_bias;
    TensorPtr<T> classifier_weight;  // j x K
    TensorPtr<T> classifier_bias;

    // Present tensors in the fixed checkpoint order.
    std::vector<std::pair<std::string, TensorPtr<T>>> named() const;

    std::size_t parameter_count() const;

    // Deep copy (optionally converting precision); copies carry requires_grad
    // but no gradient storage.
    template <typename U>
    ModelParams<U> cast() const;

    ModelParams clone() const { return cast<T>(); }
};

template <typename T>
template <typename U>
ModelParams<U> ModelParams<T>::cast() const {
    auto copy = [](const TensorPtr<T>& t) -> TensorPtr<U> {
        if (!t) return nullptr;
        return make_tensor(t->template cast<U>(), t->requires_grad());
    };
    ModelParams<U> out;
    out.conv3d_kernels = copy(conv3d_kernels);
    out.conv3d_bias = copy(conv3d_bias);
    out.mid_kernels = copy(mid_kernels);
    out.mid_bias = copy(mid_bias);
    out.out_kernels = copy(out_kernels);
    out.out_bias = copy(out_bias);
    out.stem_kernels = copy(stem_kernels);
    out.stem_bias = copy(stem_bias);
    out.global_token = copy(global_token);
    for (const auto& h : heads) {
        out.heads.push_back({copy(h.query), copy(h.key), copy(h.value)});
    }
    out.feature_weight = copy(feature_weight);
    out.feature_bias = copy(feature_bias);
    out.classifier_weight = copy(classifier_weight);
    out.classifier_bias = copy(classifier_bias);
    return out;
}

// Uniform(-a, a), a = sqrt(6 / (fan_in + fan_out)) for weights, zero biases,
// N(0, 0.02) global token. All tensors require gradients.
template <typename T>
ModelParams<T> init_params(const ModelConfig& config, std::uint64_t seed);

// Intermediate tensors of one forward pass, for shape checks and inspection.
template <typename T>
struct ForwardTrace {
    TensorPtr<T> sed_expanded;  // P x P x (K1 C), SED only
    TensorPtr<T> sed_encoded;   // P x P x K2, SED only
    TensorPtr<T> features;      // P x P x K3
    TensorPtr<T> tokens;        // 5 x K3
    TensorPtr<T> attention;     // 5 x K3 (concatenated heads)
    TensorPtr<T> residual;      // 5 x K3
    TensorPtr<T> fea;           // 1 x j
    TensorPtr<T> logits;        // 1 x K
};

template <typename T>
TensorPtr<T> sed_forward(GradGraph<T>& graph, const ModelConfig& config,
                         const ModelParams<T>& params, const TensorPtr<T>& patch,
                         ForwardTrace<T>* trace = nullptr);

// Mean of each channel over the four ceil(P/2)^2 quadrants that share the
// centre pixel, in order top-left, top-right, bottom-left, bottom-right.
// Each quadrant sum pairs positions symmetric about the quadrant centre, so
// the result is exactly equivariant under 180 degree rotation.
template <typename T>
std::array<TensorPtr<T>, 4> tokenize(GradGraph<T>& graph, const TensorPtr<T>& features);

// 5 x K3: global token (or zeros) followed by the four pooled tokens.
template <typename T>
TensorPtr<T> assemble_tokens(GradGraph<T>& graph, const std::array<TensorPtr<T>, 4>& tokens,
                             const ModelParams<T>& params, bool use_global_token);

// softmax(Q K^T / sqrt(d)) V with Q = T W_Q, K = T W_K, V = T W_V.
template <typename T>
TensorPtr<T> attention_head(GradGraph<T>& graph, const TensorPtr<T>& tokens,
                            const HeadParams<T>& head);

// Concatenated heads plus the residual tokens.
template <typename T>
TensorPtr<T> multi_head(GradGraph<T>& graph, const TensorPtr<T>& tokens,
                        const ModelParams<T>& params, ForwardTrace<T>* trace = nullptr);

// logits (1 x K) from the flattened 5 x K3 residual tokens.
template <typename T>
TensorPtr<T> feature_and_classify(GradGraph<T>& graph, const TensorPtr<T>& residual,
                                  const ModelParams<T>& params, ForwardTrace<T>* trace = nullptr);

// Full network on one P x P x C patch; returns 1 x K logits.
template <typename T>
TensorPtr<T> forward(GradGraph<T>& graph, const ModelConfig& config, const ModelParams<T>& params,
                     const TensorPtr<T>& patch, ForwardTrace<T>* trace = nullptr);

// Argmax with ties to the lowest index, returned as a 1-based class id.
template <typename T>
std::int32_t predict_class(std::span<const T> logits);

struct Checkpoint {
    ModelConfig config;
    ModelParams<float> params;
};

// HSZMDL framing: JSON {"config": {...}, "params": [{"name", "shape"}...]},
// then every tensor of ModelParams::named() in order as float32 LE.
void save_checkpoint(const ModelConfig& config, const ModelParams<float>& params,
                     const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace mvt
