#pragma once

#include <span>
#include <vector>

#include "mvt/tensor.hpp"

namespace mvt {

struct AdamConfig {
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

template <typename T>
struct AdamMoments {
    std::vector<T> first;
    std::vector<T> second;
};

// One bias-corrected Adam update of `params` in place; step >= 1 is the
// 1-based update count. Moments start zeroed and are sized on first use.
template <typename T>
void adam_step(std::span<T> params, std::span<const T> grads, AdamMoments<T>& moments,
               std::size_t step, const AdamConfig& config);

// Adam over a fixed list of tensors, reading each tensor's accumulated grad.
template <typename T>
class Adam {
  public:
    Adam(std::vector<TensorPtr<T>> params, AdamConfig config);

    void zero_grad();
    void step();
    std::size_t steps() const noexcept { return step_; }

  private:
    std::vector<TensorPtr<T>> params_;
    std::vector<AdamMoments<T>> moments_;
    AdamConfig config_;
    std::size_t step_ = 0;
};

}  // namespace mvt
