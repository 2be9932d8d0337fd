#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvt/error.hpp"

namespace mvt {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_size(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

inline std::string shape_string(const Shape& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i > 0) {
            s += "x";
        }
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

// Dense row-major array (last index fastest) with optional gradient storage.
// Shapes have at least one axis and no zero extents; a scalar is shape {1}.
template <typename T>
class Tensor {
  public:
    using value_type = T;

    Tensor() = default;

    explicit Tensor(Shape shape) : shape_(std::move(shape)) {
        check_shape(shape_);
        data_.assign(shape_size(shape_), T{});
    }

    Tensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
        check_shape(shape_);
        require(data_.size() == shape_size(shape_), ErrorKind::dimension,
                "tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                    shape_string(shape_));
    }

    static Tensor filled(Shape shape, T value) {
        Tensor t(std::move(shape));
        std::fill(t.data_.begin(), t.data_.end(), value);
        return t;
    }

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }
    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }

    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    T& at(std::size_t i, std::size_t j) { return data_[i * shape_[1] + j]; }
    const T& at(std::size_t i, std::size_t j) const { return data_[i * shape_[1] + j]; }
    T& at(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    const T& at(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }

    // Same data, new shape with equal element count.
    Tensor reshaped(Shape shape) const {
        Tensor out(std::move(shape), data_);
        return out;
    }

    bool requires_grad() const noexcept { return requires_grad_; }
    void set_requires_grad(bool flag) noexcept {
        requires_grad_ = flag;
        if (!flag) {
            grad_.clear();
        }
    }

    bool has_grad() const noexcept { return !grad_.empty(); }
    std::span<T> grad() noexcept { return grad_; }
    std::span<const T> grad() const noexcept { return grad_; }

    // Allocates zeroed gradient storage on first use.
    std::span<T> ensure_grad() {
        if (grad_.empty()) {
            grad_.assign(data_.size(), T{});
        }
        return grad_;
    }

    void zero_grad() { std::fill(grad_.begin(), grad_.end(), T{}); }
    void drop_grad() { grad_.clear(); }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
    }

    template <typename U>
    Tensor<U> cast() const {
        std::vector<U> out(data_.begin(), data_.end());
        return Tensor<U>(shape_, std::move(out));
    }

    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.shape_ == b.shape_ && a.data_ == b.data_;
    }

  private:
    static void check_shape(const Shape& shape) {
        require(!shape.empty(), ErrorKind::dimension, "tensor shape must have at least one axis");
        for (std::size_t extent : shape) {
            require(extent > 0, ErrorKind::dimension,
                    "tensor extents must be positive, got " + shape_string(shape));
        }
    }

    Shape shape_;
    std::vector<T> data_;
    bool requires_grad_ = false;
    std::vector<T> grad_;
};

template <typename T>
using TensorPtr = std::shared_ptr<Tensor<T>>;

template <typename T>
TensorPtr<T> make_tensor(Tensor<T> t, bool requires_grad = false) {
    auto p = std::make_shared<Tensor<T>>(std::move(t));
    p->set_requires_grad(requires_grad);
    return p;
}

}  // namespace mvt
