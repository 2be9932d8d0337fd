#include "mvt/adam.hpp"

#include <cmath>

namespace mvt {

template <typename T>
void adam_step(std::span<T> params, std::span<const T> grads, AdamMoments<T>& moments,
               std::size_t step, const AdamConfig& config) {
    require(params.size() == grads.size(), ErrorKind::dimension,
            "adam: parameter and gradient sizes differ");
    require(step >= 1, ErrorKind::usage, "adam: step count starts at 1");
    if (moments.first.empty()) {
        moments.first.assign(params.size(), T{});
        moments.second.assign(params.size(), T{});
    }
    require(moments.first.size() == params.size() && moments.second.size() == params.size(),
            ErrorKind::dimension, "adam: moment sizes differ from parameters");

    const T b1 = static_cast<T>(config.beta1);
    const T b2 = static_cast<T>(config.beta2);
    const T correction1 = static_cast<T>(1.0 - std::pow(config.beta1, static_cast<double>(step)));
    const T correction2 = static_cast<T>(1.0 - std::pow(config.beta2, static_cast<double>(step)));
    const T lr = static_cast<T>(config.learning_rate);
    const T eps = static_cast<T>(config.epsilon);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const T g = grads[i];
        T& m = moments.first[i];
        T& v = moments.second[i];
        m = b1 * m + (T{1} - b1) * g;
        v = b2 * v + (T{1} - b2) * g * g;
        const T m_hat = m / correction1;
        const T v_hat = v / correction2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
}

template <typename T>
Adam<T>::Adam(std::vector<TensorPtr<T>> params, AdamConfig config)
    : params_(std::move(params)), moments_(params_.size()), config_(config) {
    for (auto& p : params_) p->ensure_grad();
}

template <typename T>
void Adam<T>::zero_grad() {
    for (auto& p : params_) p->zero_grad();
}

template <typename T>
void Adam<T>::step() {
    ++step_;
    for (std::size_t i = 0; i < params_.size(); ++i) {
        auto& p = *params_[i];
        adam_step<T>(p.values(), p.ensure_grad(), moments_[i], step_, config_);
    }
}

template void adam_step(std::span<float>, std::span<const float>, AdamMoments<float>&, std::size_t,
                        const AdamConfig&);
template void adam_step(std::span<double>, std::span<const double>, AdamMoments<double>&,
                        std::size_t, const AdamConfig&);
template class Adam<float>;
template class Adam<double>;

}  // namespace mvt
