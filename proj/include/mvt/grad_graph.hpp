#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mvt/tensor.hpp"

namespace mvt {

// Tape of executed operations. Each op computes its forward value
// immediately; when recording and at least one input requires a gradient,
// the op is appended to the tape together with its adjoint. backward()
// replays the tape in exact reverse order.
//
// A graph is confined to one thread. Parameters are ordinary tensors with
// requires_grad set; their gradients accumulate across backward calls until
// the caller zeroes them.
template <typename T>
class GradGraph {
  public:
    using Ref = TensorPtr<T>;
    // Receives the op's output; output.grad() holds the incoming adjoint.
    using Adjoint = std::function<void(const Tensor<T>& output)>;

    explicit GradGraph(bool recording = true) : recording_(recording) {}

    GradGraph(const GradGraph&) = delete;
    GradGraph& operator=(const GradGraph&) = delete;

    bool recording() const noexcept { return recording_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    void clear() { nodes_.clear(); }

    Ref constant(Tensor<T> value) const { return make_tensor(std::move(value)); }

    Ref conv3d(const Ref& input, const Ref& kernels, const Ref& bias);
    Ref conv2d(const Ref& input, const Ref& kernels, const Ref& bias);
    Ref affine(const Ref& input, const Ref& weight, const Ref& bias);
    Ref matmul(const Ref& a, const Ref& b);
    Ref matmul_bt(const Ref& a, const Ref& b);
    Ref softmax_rows(const Ref& input);
    Ref relu(const Ref& input);
    Ref add(const Ref& a, const Ref& b);
    Ref scale(const Ref& input, T factor);
    Ref sum_squares(const Ref& input);
    Ref reshape(const Ref& input, Shape shape);
    // Column-wise concatenation of equal-row matrices.
    Ref concat_cols(const std::vector<Ref>& parts);
    // Stacks vectors of equal length into the rows of a matrix.
    Ref stack_rows(const std::vector<Ref>& rows);
    // Scalar mean cross-entropy; labels are 1-based class ids, one per row.
    Ref cross_entropy(const Ref& logits, std::vector<std::int32_t> labels);

    // Extension point for ops defined outside the tensor core.
    Ref record(std::vector<Ref> inputs, Tensor<T> output, Adjoint adjoint);

    // Seeds d(loss)/d(loss) = 1 and propagates adjoints in reverse order.
    void backward(const Ref& loss);

  private:
    struct Node {
        std::vector<Ref> inputs;
        Ref output;
        Adjoint adjoint;
    };

    bool recording_;
    std::vector<Node> nodes_;
};

// Gradient span of `t` if it participates in differentiation, else empty.
template <typename T>
std::span<T> grad_of(const TensorPtr<T>& t) {
    return t->requires_grad() ? t->ensure_grad() : std::span<T>{};
}

}  // namespace mvt
