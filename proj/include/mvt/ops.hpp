#pragma once

// Forward kernels and their adjoints. Backward functions accumulate (+=)
// into the supplied gradient spans; an empty span means "not needed".
// Instantiated for float and double.

#include <cstdint>
#include <span>
#include <vector>

#include "mvt/tensor.hpp"

namespace mvt::ops {

// input P1xP2xC, kernels K1 x k1 x k2 x k3 (rows, cols, channels), bias K1.
// Zero padding keeps all three input extents; output P1xP2x(K1*C) with kernel
// k's map occupying channels [k*C, (k+1)*C).
template <typename T>
Tensor<T> conv3d(const Tensor<T>& input, const Tensor<T>& kernels, const Tensor<T>& bias);

template <typename T>
void conv3d_backward(const Tensor<T>& input, const Tensor<T>& kernels, std::span<const T> grad_out,
                     std::span<T> grad_input, std::span<T> grad_kernels, std::span<T> grad_bias);

// input P1xP2xCin, kernels Cout x k x k x Cin, bias Cout. Same-size zero padding.
template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& kernels, const Tensor<T>& bias);

template <typename T>
void conv2d_backward(const Tensor<T>& input, const Tensor<T>& kernels, std::span<const T> grad_out,
                     std::span<T> grad_input, std::span<T> grad_kernels, std::span<T> grad_bias);

// out = input * weight + bias, input n x fin, weight fin x fout.
template <typename T>
Tensor<T> affine(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias);

template <typename T>
void affine_backward(const Tensor<T>& input, const Tensor<T>& weight, std::span<const T> grad_out,
                     std::span<T> grad_input, std::span<T> grad_weight, std::span<T> grad_bias);

// a (n x k) * b (k x m)
template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
void matmul_backward(const Tensor<T>& a, const Tensor<T>& b, std::span<const T> grad_out,
                     std::span<T> grad_a, std::span<T> grad_b);

// a (n x k) * transpose(b), b is m x k
template <typename T>
Tensor<T> matmul_bt(const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
void matmul_bt_backward(const Tensor<T>& a, const Tensor<T>& b, std::span<const T> grad_out,
                        std::span<T> grad_a, std::span<T> grad_b);

// Row-wise softmax with the row maximum subtracted before exponentiation.
template <typename T>
Tensor<T> softmax_rows(const Tensor<T>& input);

template <typename T>
void softmax_rows_backward(const Tensor<T>& output, std::span<const T> grad_out,
                           std::span<T> grad_input);

template <typename T>
Tensor<T> relu(const Tensor<T>& input);

template <typename T>
void relu_backward(const Tensor<T>& output, std::span<const T> grad_out, std::span<T> grad_input);

// Mean over rows of -log softmax(logits)[label - 1]; labels are 1-based.
template <typename T>
T cross_entropy(const Tensor<T>& logits, std::span<const std::int32_t> labels);

template <typename T>
void cross_entropy_backward(const Tensor<T>& logits, std::span<const std::int32_t> labels,
                            T grad_loss, std::span<T> grad_logits);

}  // namespace mvt::ops
