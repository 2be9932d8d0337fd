#include <cmath>
#include <string>

#include "mvt/model.hpp"

namespace mvt {

template <typename T>
TensorPtr<T> sed_forward(GradGraph<T>& graph, const ModelConfig& config,
                         const ModelParams<T>& params, const TensorPtr<T>& patch,
                         ForwardTrace<T>* trace) {
    const std::size_t p = config.patch_size;
    require(patch->shape() == Shape{p, p, config.in_channels()}, ErrorKind::dimension,
            "patch shape " + shape_string(patch->shape()) + " does not match expected " +
                shape_string({p, p, config.in_channels()}));
    if (!config.use_sed) {
        auto features = graph.relu(graph.conv2d(patch, params.stem_kernels, params.stem_bias));
        if (trace) trace->features = features;
        return features;
    }
    auto expanded = graph.relu(graph.conv3d(patch, params.conv3d_kernels, params.conv3d_bias));
    auto encoded = graph.relu(graph.conv2d(expanded, params.mid_kernels, params.mid_bias));
    auto features = graph.relu(graph.conv2d(encoded, params.out_kernels, params.out_bias));
    if (trace) {
        trace->sed_expanded = expanded;
        trace->sed_encoded = encoded;
        trace->features = features;
    }
    return features;
}

namespace {

struct Quadrant {
    std::size_t row0;
    std::size_t col0;
};

template <typename T>
Tensor<T> pool_quadrant(const Tensor<T>& features, Quadrant q, std::size_t side) {
    const std::size_t cols = features.dim(1), chans = features.dim(2);
    const std::size_t cells = side * side;
    auto cell = [&](std::size_t idx) {
        const std::size_t r = q.row0 + idx / side, c = q.col0 + idx % side;
        return features.data() + (r * cols + c) * chans;
    };
    Tensor<T> token({chans});
    T* acc = token.data();
    // Pair cell idx with its mirror through the quadrant centre; a + b == b + a
    // exactly, so a 180 degree rotation reproduces the same partial sums.
    for (std::size_t idx = 0; idx < cells / 2; ++idx) {
        const T* a = cell(idx);
        const T* b = cell(cells - 1 - idx);
        for (std::size_t k = 0; k < chans; ++k) acc[k] += a[k] + b[k];
    }
    if (cells % 2 == 1) {
        const T* centre = cell(cells / 2);
        for (std::size_t k = 0; k < chans; ++k) acc[k] += centre[k];
    }
    const T denom = static_cast<T>(cells);
    for (std::size_t k = 0; k < chans; ++k) acc[k] /= denom;
    return token;
}

}  // namespace

template <typename T>
std::array<TensorPtr<T>, 4> tokenize(GradGraph<T>& graph, const TensorPtr<T>& features) {
    require(features->rank() == 3 && features->dim(0) == features->dim(1), ErrorKind::dimension,
            "tokenize needs a square P x P x C cuboid, got " + shape_string(features->shape()));
    const std::size_t p = features->dim(0);
    require(p % 2 == 1, ErrorKind::config, "tokenize needs an odd patch size, got " + std::to_string(p));
    const std::size_t c = p / 2;
    const std::size_t side = c + 1;
    const std::array<Quadrant, 4> quads{{{0, 0}, {0, c}, {c, 0}, {c, c}}};

    std::array<TensorPtr<T>, 4> tokens;
    for (std::size_t i = 0; i < 4; ++i) {
        const Quadrant q = quads[i];
        tokens[i] = graph.record({features}, pool_quadrant(*features, q, side),
                                 [features, q, side](const Tensor<T>& o) {
                                     if (!features->requires_grad()) return;
                                     auto g = features->ensure_grad();
                                     const std::size_t cols = features->dim(1);
                                     const std::size_t chans = features->dim(2);
                                     const T denom = static_cast<T>(side * side);
                                     for (std::size_t r = 0; r < side; ++r) {
                                         for (std::size_t cc = 0; cc < side; ++cc) {
                                             T* gp = g.data() +
                                                     ((q.row0 + r) * cols + q.col0 + cc) * chans;
                                             for (std::size_t k = 0; k < chans; ++k) {
                                                 gp[k] += o.grad()[k] / denom;
                                             }
                                         }
                                     }
                                 });
    }
    return tokens;
}

template <typename T>
TensorPtr<T> assemble_tokens(GradGraph<T>& graph, const std::array<TensorPtr<T>, 4>& tokens,
                             const ModelParams<T>& params, bool use_global_token) {
    const std::size_t width = tokens[0]->size();
    TensorPtr<T> global;
    if (use_global_token) {
        require(params.global_token != nullptr, ErrorKind::config,
                "global token enabled but not present in parameters");
        global = params.global_token;
    } else {
        global = graph.constant(Tensor<T>({width}));
    }
    return graph.stack_rows({global, tokens[0], tokens[1], tokens[2], tokens[3]});
}

template <typename T>
TensorPtr<T> attention_head(GradGraph<T>& graph, const TensorPtr<T>& tokens,
                            const HeadParams<T>& head) {
    require(head.query->shape() == head.key->shape() && head.key->shape() == head.value->shape(),
            ErrorKind::dimension, "attention projections must share one shape");
    const std::size_t d = head.query->dim(1);
    auto q = graph.matmul(tokens, head.query);
    auto k = graph.matmul(tokens, head.key);
    auto v = graph.matmul(tokens, head.value);
    auto logits = graph.scale(graph.matmul_bt(q, k), static_cast<T>(1.0 / std::sqrt(static_cast<double>(d))));
    return graph.matmul(graph.softmax_rows(logits), v);
}

template <typename T>
TensorPtr<T> multi_head(GradGraph<T>& graph, const TensorPtr<T>& tokens,
                        const ModelParams<T>& params, ForwardTrace<T>* trace) {
    require(!params.heads.empty(), ErrorKind::config, "multi-head attention needs at least one head");
    const std::size_t width = tokens->dim(1);
    const std::size_t d = params.heads.front().query->dim(1);
    require(params.heads.size() * d == width, ErrorKind::config,
            "heads (" + std::to_string(params.heads.size()) + ") x head dim (" + std::to_string(d) +
                ") must equal token width " + std::to_string(width));
    std::vector<TensorPtr<T>> outputs;
    outputs.reserve(params.heads.size());
    for (const auto& head : params.heads) outputs.push_back(attention_head(graph, tokens, head));
    auto attention = graph.concat_cols(outputs);
    auto residual = graph.add(attention, tokens);
    if (trace) {
        trace->tokens = tokens;
        trace->attention = attention;
        trace->residual = residual;
    }
    return residual;
}

template <typename T>
TensorPtr<T> feature_and_classify(GradGraph<T>& graph, const TensorPtr<T>& residual,
                                  const ModelParams<T>& params, ForwardTrace<T>* trace) {
    auto flat = graph.reshape(residual, {1, residual->size()});
    auto fea = graph.affine(flat, params.feature_weight, params.feature_bias);
    auto logits = graph.affine(fea, params.classifier_weight, params.classifier_bias);
    if (trace) {
        trace->fea = fea;
        trace->logits = logits;
    }
    return logits;
}

template <typename T>
TensorPtr<T> forward(GradGraph<T>& graph, const ModelConfig& config, const ModelParams<T>& params,
                     const TensorPtr<T>& patch, ForwardTrace<T>* trace) {
    auto features = sed_forward(graph, config, params, patch, trace);
    auto tokens = assemble_tokens(graph, tokenize(graph, features), params, config.use_global_token);
    auto residual = multi_head(graph, tokens, params, trace);
    return feature_and_classify(graph, residual, params, trace);
}

template <typename T>
std::int32_t predict_class(std::span<const T> logits) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < logits.size(); ++i) {
        if (logits[i] > logits[best]) best = i;
    }
    return static_cast<std::int32_t>(best + 1);
}

#define MVT_INSTANTIATE_NETWORK(T)                                                                 \
    template TensorPtr<T> sed_forward(GradGraph<T>&, const ModelConfig&, const ModelParams<T>&,    \
                                      const TensorPtr<T>&, ForwardTrace<T>*);                      \
    template std::array<TensorPtr<T>, 4> tokenize(GradGraph<T>&, const TensorPtr<T>&);             \
    template TensorPtr<T> assemble_tokens(GradGraph<T>&, const std::array<TensorPtr<T>, 4>&,       \
                                          const ModelParams<T>&, bool);                            \
    template TensorPtr<T> attention_head(GradGraph<T>&, const TensorPtr<T>&, const HeadParams<T>&); \
    template TensorPtr<T> multi_head(GradGraph<T>&, const TensorPtr<T>&, const ModelParams<T>&,    \
                                     ForwardTrace<T>*);                                            \
    template TensorPtr<T> feature_and_classify(GradGraph<T>&, const TensorPtr<T>&,                 \
                                               const ModelParams<T>&, ForwardTrace<T>*);           \
    template TensorPtr<T> forward(GradGraph<T>&, const ModelConfig&, const ModelParams<T>&,        \
                                  const TensorPtr<T>&, ForwardTrace<T>*);                          \
    template std::int32_t predict_class(std::span<const T>);

MVT_INSTANTIATE_NETWORK(float)
MVT_INSTANTIATE_NETWORK(double)

#undef MVT_INSTANTIATE_NETWORK

}  // namespace mvt
