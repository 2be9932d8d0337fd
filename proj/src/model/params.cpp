#include <cmath>
#include <random>

#include "mvt/model.hpp"
#include "mvt/rng.hpp"

namespace mvt {

template <typename T>
std::vector<std::pair<std::string, TensorPtr<T>>> ModelParams<T>::named() const {
    std::vector<std::pair<std::string, TensorPtr<T>>> out;
    auto add = [&out](std::string name, const TensorPtr<T>& t) {
        if (t) out.emplace_back(std::move(name), t);
    };
    add("sed.conv3d.kernels", conv3d_kernels);
    add("sed.conv3d.bias", conv3d_bias);
    add("sed.mid.kernels", mid_kernels);
    add("sed.mid.bias", mid_bias);
    add("sed.out.kernels", out_kernels);
    add("sed.out.bias", out_bias);
    add("stem.kernels", stem_kernels);
    add("stem.bias", stem_bias);
    add("global_token", global_token);
    for (std::size_t h = 0; h < heads.size(); ++h) {
        const std::string prefix = "head" + std::to_string(h) + ".";
        add(prefix + "query", heads[h].query);
        add(prefix + "key", heads[h].key);
        add(prefix + "value", heads[h].value);
    }
    add("feature.weight", feature_weight);
    add("feature.bias", feature_bias);
    add("classifier.weight", classifier_weight);
    add("classifier.bias", classifier_bias);
    return out;
}

template <typename T>
std::size_t ModelParams<T>::parameter_count() const {
    std::size_t n = 0;
    for (const auto& [name, t] : named()) n += t->size();
    return n;
}

namespace {

template <typename T>
TensorPtr<T> glorot(Shape shape, std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-a, a);
    Tensor<T> t(std::move(shape));
    for (auto& v : t.values()) v = static_cast<T>(dist(rng));
    return make_tensor(std::move(t), true);
}

template <typename T>
TensorPtr<T> zeros(Shape shape) {
    return make_tensor(Tensor<T>(std::move(shape)), true);
}

}  // namespace

template <typename T>
ModelParams<T> init_params(const ModelConfig& config, std::uint64_t seed) {
    config.validate();
    auto rng = make_rng(seed, RngStream::init);
    const std::size_t c_in = config.in_channels();
    const std::size_t k3d = config.conv3d_extent;
    const std::size_t k2d = config.conv2d_extent;
    const std::size_t taps2d = k2d * k2d;
    const std::size_t width = config.feature_channels;

    ModelParams<T> p;
    if (config.use_sed) {
        const std::size_t taps3d = k3d * k3d * k3d;
        const std::size_t expanded = config.conv3d_kernels * c_in;
        p.conv3d_kernels = glorot<T>({config.conv3d_kernels, k3d, k3d, k3d}, taps3d,
                                     config.conv3d_kernels * taps3d, rng);
        p.conv3d_bias = zeros<T>({config.conv3d_kernels});
        p.mid_kernels = glorot<T>({config.mid_channels, k2d, k2d, expanded}, expanded * taps2d,
                                  config.mid_channels * taps2d, rng);
        p.mid_bias = zeros<T>({config.mid_channels});
        p.out_kernels = glorot<T>({width, k2d, k2d, config.mid_channels},
                                  config.mid_channels * taps2d, width * taps2d, rng);
        p.out_bias = zeros<T>({width});
    } else {
        p.stem_kernels = glorot<T>({width, k2d, k2d, c_in}, c_in * taps2d, width * taps2d, rng);
        p.stem_bias = zeros<T>({width});
    }
    if (config.use_global_token) {
        std::normal_distribution<double> dist(0.0, 0.02);
        Tensor<T> token({width});
        for (auto& v : token.values()) v = static_cast<T>(dist(rng));
        p.global_token = make_tensor(std::move(token), true);
    }
    const std::size_t d = config.head_dim();
    for (std::size_t h = 0; h < config.heads; ++h) {
        HeadParams<T> head;
        head.query = glorot<T>({width, d}, width, d, rng);
        head.key = glorot<T>({width, d}, width, d, rng);
        head.value = glorot<T>({width, d}, width, d, rng);
        p.heads.push_back(std::move(head));
    }
    const std::size_t flat = 5 * width;
    p.feature_weight = glorot<T>({flat, config.feature_dim}, flat, config.feature_dim, rng);
    p.feature_bias = zeros<T>({config.feature_dim});
    p.classifier_weight = glorot<T>({config.feature_dim, config.num_classes}, config.feature_dim,
                                    config.num_classes, rng);
    p.classifier_bias = zeros<T>({config.num_classes});
    return p;
}

template struct ModelParams<float>;
template struct ModelParams<double>;
template ModelParams<float> init_params(const ModelConfig&, std::uint64_t);
template ModelParams<double> init_params(const ModelConfig&, std::uint64_t);

}  // namespace mvt
