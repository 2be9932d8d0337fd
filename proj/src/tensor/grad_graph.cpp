#include "mvt/grad_graph.hpp"

#include <algorithm>
#include <string>

#include "mvt/ops.hpp"

namespace mvt {

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::record(std::vector<Ref> inputs, Tensor<T> output,
                                                Adjoint adjoint) {
    auto out = make_tensor(std::move(output));
    const bool needs_grad =
        recording_ && std::any_of(inputs.begin(), inputs.end(),
                                  [](const Ref& r) { return r->requires_grad(); });
    if (needs_grad) {
        out->set_requires_grad(true);
        nodes_.push_back(Node{std::move(inputs), out, std::move(adjoint)});
    }
    return out;
}

template <typename T>
void GradGraph<T>::backward(const Ref& loss) {
    require(loss->size() == 1, ErrorKind::usage,
            "backward needs a scalar loss, got shape " + shape_string(loss->shape()));
    require(loss->requires_grad(), ErrorKind::usage,
            "loss does not depend on any tensor that requires a gradient");
    loss->ensure_grad()[0] = T{1};
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
        if (it->output->has_grad()) {
            it->adjoint(*it->output);
        }
    }
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::conv3d(const Ref& input, const Ref& kernels,
                                                const Ref& bias) {
    auto out = ops::conv3d(*input, *kernels, *bias);
    return record({input, kernels, bias}, std::move(out), [input, kernels, bias](const Tensor<T>& o) {
        ops::conv3d_backward(*input, *kernels, o.grad(), grad_of(input), grad_of(kernels),
                             grad_of(bias));
    });
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::conv2d(const Ref& input, const Ref& kernels,
                                                const Ref& bias) {
    auto out = ops::conv2d(*input, *kernels, *bias);
    return record({input, kernels, bias}, std::move(out), [input, kernels, bias](const Tensor<T>& o) {
        ops::conv2d_backward(*input, *kernels, o.grad(), grad_of(input), grad_of(kernels),
                             grad_of(bias));
    });
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::affine(const Ref& input, const Ref& weight,
                                                const Ref& bias) {
    auto out = ops::affine(*input, *weight, *bias);
    return record({input, weight, bias}, std::move(out), [input, weight, bias](const Tensor<T>& o) {
        ops::affine_backward(*input, *weight, o.grad(), grad_of(input), grad_of(weight),
                             grad_of(bias));
    });
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::matmul(const Ref& a, const Ref& b) {
    auto out = ops::matmul(*a, *b);
    return record({a, b}, std::move(out), [a, b](const Tensor<T>& o) {
        ops::matmul_backward(*a, *b, o.grad(), grad_of(a), grad_of(b));
    });
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::matmul_bt(const Ref& a, const Ref& b) {
    auto out = ops::matmul_bt(*a, *b);
    return record({a, b}, std::move(out), [a, b](const Tensor<T>& o) {
        ops::matmul_bt_backward(*a, *b, o.grad(), grad_of(a), grad_of(b));
    });
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::softmax_rows(const Ref& input) {
    auto out = ops::softmax_rows(*input);
    return record({input}, std::move(out), [input](const Tensor<T>& o) {
        if (input->requires_grad()) {
            ops::softmax_rows_backward(o, o.grad(), input->ensure_grad());
        }
    });
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::relu(const Ref& input) {
    auto out = ops::relu(*input);
    return record({input}, std::move(out), [input](const Tensor<T>& o) {
        if (input->requires_grad()) {
            ops::relu_backward(o, o.grad(), input->ensure_grad());
        }
    });
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::add(const Ref& a, const Ref& b) {
    require(a->shape() == b->shape(), ErrorKind::dimension,
            "add shapes differ: " + shape_string(a->shape()) + " vs " + shape_string(b->shape()));
    Tensor<T> out(a->shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*a)[i] + (*b)[i];
    return record({a, b}, std::move(out), [a, b](const Tensor<T>& o) {
        for (const Ref& t : {a, b}) {
            if (!t->requires_grad()) continue;
            auto g = t->ensure_grad();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad()[i];
        }
    });
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::scale(const Ref& input, T factor) {
    Tensor<T> out(input->shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*input)[i] * factor;
    return record({input}, std::move(out), [input, factor](const Tensor<T>& o) {
        if (!input->requires_grad()) return;
        auto g = input->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad()[i] * factor;
    });
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::sum_squares(const Ref& input) {
    T total{};
    for (T v : input->values()) total += v * v;
    return record({input}, Tensor<T>({1}, {total}), [input](const Tensor<T>& o) {
        if (!input->requires_grad()) return;
        auto g = input->ensure_grad();
        const T go = o.grad()[0];
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += T{2} * (*input)[i] * go;
    });
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::reshape(const Ref& input, Shape shape) {
    auto out = input->reshaped(std::move(shape));
    return record({input}, std::move(out), [input](const Tensor<T>& o) {
        if (!input->requires_grad()) return;
        auto g = input->ensure_grad();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad()[i];
    });
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::concat_cols(const std::vector<Ref>& parts) {
    require(!parts.empty(), ErrorKind::dimension, "concat_cols needs at least one part");
    const std::size_t rows = parts.front()->dim(0);
    std::size_t total_cols = 0;
    for (const Ref& p : parts) {
        require(p->rank() == 2 && p->dim(0) == rows, ErrorKind::dimension,
                "concat_cols parts must be matrices with equal row counts");
        total_cols += p->dim(1);
    }
    Tensor<T> out({rows, total_cols});
    std::size_t offset = 0;
    for (const Ref& p : parts) {
        const std::size_t cols = p->dim(1);
        for (std::size_t r = 0; r < rows; ++r) {
            std::copy_n(p->data() + r * cols, cols, out.data() + r * total_cols + offset);
        }
        offset += cols;
    }
    return record(parts, std::move(out), [parts, rows, total_cols](const Tensor<T>& o) {
        std::size_t off = 0;
        for (const Ref& p : parts) {
            const std::size_t cols = p->dim(1);
            if (p->requires_grad()) {
                auto g = p->ensure_grad();
                for (std::size_t r = 0; r < rows; ++r) {
                    for (std::size_t c = 0; c < cols; ++c) {
                        g[r * cols + c] += o.grad()[r * total_cols + off + c];
                    }
                }
            }
            off += cols;
        }
    });
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::stack_rows(const std::vector<Ref>& rows) {
    require(!rows.empty(), ErrorKind::dimension, "stack_rows needs at least one row");
    const std::size_t width = rows.front()->size();
    for (const Ref& r : rows) {
        require(r->size() == width, ErrorKind::dimension, "stack_rows rows must have equal length");
    }
    Tensor<T> out({rows.size(), width});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy_n(rows[i]->data(), width, out.data() + i * width);
    }
    return record(rows, std::move(out), [rows, width](const Tensor<T>& o) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i]->requires_grad()) continue;
            auto g = rows[i]->ensure_grad();
            for (std::size_t c = 0; c < width; ++c) g[c] += o.grad()[i * width + c];
        }
    });
}

template <typename T>
typename GradGraph<T>::Ref GradGraph<T>::cross_entropy(const Ref& logits,
                                                       std::vector<std::int32_t> labels) {
    const T loss = ops::cross_entropy(*logits, std::span<const std::int32_t>(labels));
    return record({logits}, Tensor<T>({1}, {loss}),
                  [logits, labels = std::move(labels)](const Tensor<T>& o) {
                      if (!logits->requires_grad()) return;
                      ops::cross_entropy_backward(*logits, std::span<const std::int32_t>(labels),
                                                  o.grad()[0], logits->ensure_grad());
                  });
}

template class GradGraph<float>;
template class GradGraph<double>;

}  // namespace mvt
