#include "mvt/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mvt::ops {

namespace {

void check_rank(const Shape& shape, std::size_t rank, const char* what) {
    require(shape.size() == rank, ErrorKind::dimension,
            std::string(what) + " must have rank " + std::to_string(rank) + ", got " +
                shape_string(shape));
}

void check_odd(std::size_t extent, const char* what) {
    require(extent % 2 == 1, ErrorKind::config,
            std::string(what) + " kernel extent must be odd, got " + std::to_string(extent));
}

// Index of input coordinate `pos + tap - radius`, or -1 when it falls in the padding.
inline std::ptrdiff_t shifted(std::size_t pos, std::size_t tap, std::size_t radius,
                              std::size_t extent) {
    auto idx = static_cast<std::ptrdiff_t>(pos + tap) - static_cast<std::ptrdiff_t>(radius);
    if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(extent)) {
        return -1;
    }
    return idx;
}

}  // namespace

template <typename T>
Tensor<T> conv3d(const Tensor<T>& input, const Tensor<T>& kernels, const Tensor<T>& bias) {
    check_rank(input.shape(), 3, "conv3d input");
    check_rank(kernels.shape(), 4, "conv3d kernels");
    check_rank(bias.shape(), 1, "conv3d bias");
    const std::size_t rows = input.dim(0), cols = input.dim(1), chans = input.dim(2);
    const std::size_t nk = kernels.dim(0), kr = kernels.dim(1), kc = kernels.dim(2),
                      kd = kernels.dim(3);
    check_odd(kr, "conv3d");
    check_odd(kc, "conv3d");
    check_odd(kd, "conv3d");
    require(bias.dim(0) == nk, ErrorKind::dimension, "conv3d bias length must equal kernel count");

    Tensor<T> out({rows, cols, nk * chans});
    const T* x = input.data();
    const T* w = kernels.data();
    T* y = out.data();
    for (std::size_t k = 0; k < nk; ++k) {
        const T* wk = w + k * kr * kc * kd;
        for (std::size_t h = 0; h < rows; ++h) {
            for (std::size_t c = 0; c < cols; ++c) {
                T* yo = y + (h * cols + c) * nk * chans + k * chans;
                for (std::size_t b = 0; b < chans; ++b) {
                    yo[b] = bias[k];
                }
                for (std::size_t i = 0; i < kr; ++i) {
                    const auto ih = shifted(h, i, kr / 2, rows);
                    if (ih < 0) continue;
                    for (std::size_t j = 0; j < kc; ++j) {
                        const auto iw = shifted(c, j, kc / 2, cols);
                        if (iw < 0) continue;
                        const T* xi = x + (static_cast<std::size_t>(ih) * cols +
                                           static_cast<std::size_t>(iw)) * chans;
                        const T* wij = wk + (i * kc + j) * kd;
                        for (std::size_t l = 0; l < kd; ++l) {
                            // output band b reads input band b + l - kd/2
                            const std::ptrdiff_t off =
                                static_cast<std::ptrdiff_t>(l) - static_cast<std::ptrdiff_t>(kd / 2);
                            const std::size_t lo = off < 0 ? static_cast<std::size_t>(-off) : 0;
                            const std::size_t hi =
                                off > 0 ? (chans > static_cast<std::size_t>(off)
                                               ? chans - static_cast<std::size_t>(off)
                                               : 0)
                                        : chans;
                            const T wv = wij[l];
                            for (std::size_t b = lo; b < hi; ++b) {
                                yo[b] += wv * xi[static_cast<std::ptrdiff_t>(b) + off];
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

template <typename T>
void conv3d_backward(const Tensor<T>& input, const Tensor<T>& kernels, std::span<const T> grad_out,
                     std::span<T> grad_input, std::span<T> grad_kernels, std::span<T> grad_bias) {
    const std::size_t rows = input.dim(0), cols = input.dim(1), chans = input.dim(2);
    const std::size_t nk = kernels.dim(0), kr = kernels.dim(1), kc = kernels.dim(2),
                      kd = kernels.dim(3);
    const T* x = input.data();
    const T* w = kernels.data();
    const T* g = grad_out.data();
    const bool want_in = !grad_input.empty();
    const bool want_w = !grad_kernels.empty();

    for (std::size_t k = 0; k < nk; ++k) {
        const T* wk = w + k * kr * kc * kd;
        T* gwk = want_w ? grad_kernels.data() + k * kr * kc * kd : nullptr;
        for (std::size_t h = 0; h < rows; ++h) {
            for (std::size_t c = 0; c < cols; ++c) {
                const T* go = g + (h * cols + c) * nk * chans + k * chans;
                if (!grad_bias.empty()) {
                    T acc{};
                    for (std::size_t b = 0; b < chans; ++b) acc += go[b];
                    grad_bias[k] += acc;
                }
                for (std::size_t i = 0; i < kr; ++i) {
                    const auto ih = shifted(h, i, kr / 2, rows);
                    if (ih < 0) continue;
                    for (std::size_t j = 0; j < kc; ++j) {
                        const auto iw = shifted(c, j, kc / 2, cols);
                        if (iw < 0) continue;
                        const std::size_t base = (static_cast<std::size_t>(ih) * cols +
                                                  static_cast<std::size_t>(iw)) * chans;
                        const T* xi = x + base;
                        for (std::size_t l = 0; l < kd; ++l) {
                            const std::ptrdiff_t off =
                                static_cast<std::ptrdiff_t>(l) - static_cast<std::ptrdiff_t>(kd / 2);
                            const std::size_t lo = off < 0 ? static_cast<std::size_t>(-off) : 0;
                            const std::size_t hi =
                                off > 0 ? (chans > static_cast<std::size_t>(off)
                                               ? chans - static_cast<std::size_t>(off)
                                               : 0)
                                        : chans;
                            const std::size_t widx = (i * kc + j) * kd + l;
                            if (want_w) {
                                T acc{};
                                for (std::size_t b = lo; b < hi; ++b) {
                                    acc += go[b] * xi[static_cast<std::ptrdiff_t>(b) + off];
                                }
                                gwk[widx] += acc;
                            }
                            if (want_in) {
                                const T wv = wk[widx];
                                T* gi = grad_input.data() + base;
                                for (std::size_t b = lo; b < hi; ++b) {
                                    gi[static_cast<std::ptrdiff_t>(b) + off] += wv * go[b];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& kernels, const Tensor<T>& bias) {
    check_rank(input.shape(), 3, "conv2d input");
    check_rank(kernels.shape(), 4, "conv2d kernels");
    check_rank(bias.shape(), 1, "conv2d bias");
    const std::size_t rows = input.dim(0), cols = input.dim(1), cin = input.dim(2);
    const std::size_t cout = kernels.dim(0), kr = kernels.dim(1), kc = kernels.dim(2);
    check_odd(kr, "conv2d");
    check_odd(kc, "conv2d");
    require(kernels.dim(3) == cin, ErrorKind::dimension,
            "conv2d kernel depth " + std::to_string(kernels.dim(3)) + " does not match input channels " +
                std::to_string(cin));
    require(bias.dim(0) == cout, ErrorKind::dimension, "conv2d bias length must equal kernel count");

    // Tap-major copy (tap, cin, cout) so the innermost loop runs over output channels.
    const std::size_t taps = kr * kc;
    std::vector<T> wt(taps * cin * cout);
    for (std::size_t o = 0; o < cout; ++o) {
        for (std::size_t t = 0; t < taps; ++t) {
            for (std::size_t ci = 0; ci < cin; ++ci) {
                wt[(t * cin + ci) * cout + o] = kernels[(o * taps + t) * cin + ci];
            }
        }
    }

    Tensor<T> out({rows, cols, cout});
    const T* x = input.data();
    T* y = out.data();
    for (std::size_t h = 0; h < rows; ++h) {
        for (std::size_t c = 0; c < cols; ++c) {
            T* __restrict yo = y + (h * cols + c) * cout;
            for (std::size_t o = 0; o < cout; ++o) yo[o] = bias[o];
            for (std::size_t i = 0; i < kr; ++i) {
                const auto ih = shifted(h, i, kr / 2, rows);
                if (ih < 0) continue;
                for (std::size_t j = 0; j < kc; ++j) {
                    const auto iw = shifted(c, j, kc / 2, cols);
                    if (iw < 0) continue;
                    const T* xi = x + (static_cast<std::size_t>(ih) * cols +
                                       static_cast<std::size_t>(iw)) * cin;
                    const T* wtap = wt.data() + (i * kc + j) * cin * cout;
                    for (std::size_t ci = 0; ci < cin; ++ci) {
                        const T xv = xi[ci];
                        const T* __restrict wrow = wtap + ci * cout;
                        for (std::size_t o = 0; o < cout; ++o) {
                            yo[o] += xv * wrow[o];
                        }
                    }
                }
            }
        }
    }
    return out;
}

template <typename T>
void conv2d_backward(const Tensor<T>& input, const Tensor<T>& kernels, std::span<const T> grad_out,
                     std::span<T> grad_input, std::span<T> grad_kernels, std::span<T> grad_bias) {
    const std::size_t rows = input.dim(0), cols = input.dim(1), cin = input.dim(2);
    const std::size_t cout = kernels.dim(0), kr = kernels.dim(1), kc = kernels.dim(2);
    const std::size_t taps = kr * kc;
    const T* x = input.data();
    const T* w = kernels.data();
    const bool want_in = !grad_input.empty();
    const bool want_w = !grad_kernels.empty();

    for (std::size_t h = 0; h < rows; ++h) {
        for (std::size_t c = 0; c < cols; ++c) {
            const T* go = grad_out.data() + (h * cols + c) * cout;
            if (!grad_bias.empty()) {
                for (std::size_t o = 0; o < cout; ++o) grad_bias[o] += go[o];
            }
            for (std::size_t i = 0; i < kr; ++i) {
                const auto ih = shifted(h, i, kr / 2, rows);
                if (ih < 0) continue;
                for (std::size_t j = 0; j < kc; ++j) {
                    const auto iw = shifted(c, j, kc / 2, cols);
                    if (iw < 0) continue;
                    const std::size_t base = (static_cast<std::size_t>(ih) * cols +
                                              static_cast<std::size_t>(iw)) * cin;
                    const std::size_t t = i * kc + j;
                    const T* __restrict xi = x + base;
                    for (std::size_t o = 0; o < cout; ++o) {
                        const T gv = go[o];
                        if (gv == T{}) continue;
                        const T* __restrict wrow = w + (o * taps + t) * cin;
                        if (want_in) {
                            T* __restrict gi = grad_input.data() + base;
                            for (std::size_t ci = 0; ci < cin; ++ci) gi[ci] += gv * wrow[ci];
                        }
                        if (want_w) {
                            T* __restrict gw = grad_kernels.data() + (o * taps + t) * cin;
                            for (std::size_t ci = 0; ci < cin; ++ci) gw[ci] += gv * xi[ci];
                        }
                    }
                }
            }
        }
    }
}

template <typename T>
Tensor<T> affine(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias) {
    check_rank(input.shape(), 2, "affine input");
    check_rank(weight.shape(), 2, "affine weight");
    check_rank(bias.shape(), 1, "affine bias");
    const std::size_t n = input.dim(0), fin = input.dim(1), fout = weight.dim(1);
    require(weight.dim(0) == fin, ErrorKind::dimension,
            "affine inner dimensions disagree: " + shape_string(input.shape()) + " by " +
                shape_string(weight.shape()));
    require(bias.dim(0) == fout, ErrorKind::dimension, "affine bias length must equal output width");
    Tensor<T> out({n, fout});
    for (std::size_t i = 0; i < n; ++i) {
        T* __restrict yo = out.data() + i * fout;
        for (std::size_t j = 0; j < fout; ++j) yo[j] = bias[j];
        for (std::size_t k = 0; k < fin; ++k) {
            const T xv = input[i * fin + k];
            const T* __restrict wrow = weight.data() + k * fout;
            for (std::size_t j = 0; j < fout; ++j) yo[j] += xv * wrow[j];
        }
    }
    return out;
}

template <typename T>
void affine_backward(const Tensor<T>& input, const Tensor<T>& weight, std::span<const T> grad_out,
                     std::span<T> grad_input, std::span<T> grad_weight, std::span<T> grad_bias) {
    const std::size_t n = input.dim(0), fin = input.dim(1), fout = weight.dim(1);
    for (std::size_t i = 0; i < n; ++i) {
        const T* go = grad_out.data() + i * fout;
        if (!grad_bias.empty()) {
            for (std::size_t j = 0; j < fout; ++j) grad_bias[j] += go[j];
        }
        for (std::size_t k = 0; k < fin; ++k) {
            const T* wrow = weight.data() + k * fout;
            if (!grad_input.empty()) {
                T acc{};
                for (std::size_t j = 0; j < fout; ++j) acc += go[j] * wrow[j];
                grad_input[i * fin + k] += acc;
            }
            if (!grad_weight.empty()) {
                const T xv = input[i * fin + k];
                T* gw = grad_weight.data() + k * fout;
                for (std::size_t j = 0; j < fout; ++j) gw[j] += xv * go[j];
            }
        }
    }
}

template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
    check_rank(a.shape(), 2, "matmul lhs");
    check_rank(b.shape(), 2, "matmul rhs");
    require(a.dim(1) == b.dim(0), ErrorKind::dimension,
            "matmul inner dimensions disagree: " + shape_string(a.shape()) + " by " +
                shape_string(b.shape()));
    const std::size_t n = a.dim(0), k = a.dim(1), m = b.dim(1);
    Tensor<T> out({n, m});
    for (std::size_t i = 0; i < n; ++i) {
        T* yo = out.data() + i * m;
        for (std::size_t l = 0; l < k; ++l) {
            const T av = a[i * k + l];
            const T* brow = b.data() + l * m;
            for (std::size_t j = 0; j < m; ++j) yo[j] += av * brow[j];
        }
    }
    return out;
}

template <typename T>
void matmul_backward(const Tensor<T>& a, const Tensor<T>& b, std::span<const T> grad_out,
                     std::span<T> grad_a, std::span<T> grad_b) {
    const std::size_t n = a.dim(0), k = a.dim(1), m = b.dim(1);
    for (std::size_t i = 0; i < n; ++i) {
        const T* go = grad_out.data() + i * m;
        for (std::size_t l = 0; l < k; ++l) {
            const T* brow = b.data() + l * m;
            if (!grad_a.empty()) {
                T acc{};
                for (std::size_t j = 0; j < m; ++j) acc += go[j] * brow[j];
                grad_a[i * k + l] += acc;
            }
            if (!grad_b.empty()) {
                const T av = a[i * k + l];
                T* gb = grad_b.data() + l * m;
                for (std::size_t j = 0; j < m; ++j) gb[j] += av * go[j];
            }
        }
    }
}

template <typename T>
Tensor<T> matmul_bt(const Tensor<T>& a, const Tensor<T>& b) {
    check_rank(a.shape(), 2, "matmul_bt lhs");
    check_rank(b.shape(), 2, "matmul_bt rhs");
    require(a.dim(1) == b.dim(1), ErrorKind::dimension,
            "matmul_bt inner dimensions disagree: " + shape_string(a.shape()) + " by " +
                shape_string(b.shape()) + "^T");
    const std::size_t n = a.dim(0), k = a.dim(1), m = b.dim(0);
    Tensor<T> out({n, m});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            T acc{};
            for (std::size_t l = 0; l < k; ++l) acc += a[i * k + l] * b[j * k + l];
            out[i * m + j] = acc;
        }
    }
    return out;
}

template <typename T>
void matmul_bt_backward(const Tensor<T>& a, const Tensor<T>& b, std::span<const T> grad_out,
                        std::span<T> grad_a, std::span<T> grad_b) {
    const std::size_t n = a.dim(0), k = a.dim(1), m = b.dim(0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const T gv = grad_out[i * m + j];
            if (!grad_a.empty()) {
                for (std::size_t l = 0; l < k; ++l) grad_a[i * k + l] += gv * b[j * k + l];
            }
            if (!grad_b.empty()) {
                for (std::size_t l = 0; l < k; ++l) grad_b[j * k + l] += gv * a[i * k + l];
            }
        }
    }
}

template <typename T>
Tensor<T> softmax_rows(const Tensor<T>& input) {
    check_rank(input.shape(), 2, "softmax_rows input");
    const std::size_t n = input.dim(0), m = input.dim(1);
    Tensor<T> out(input.shape());
    for (std::size_t i = 0; i < n; ++i) {
        const T* x = input.data() + i * m;
        T* y = out.data() + i * m;
        const T peak = *std::max_element(x, x + m);
        T total{};
        for (std::size_t j = 0; j < m; ++j) {
            y[j] = std::exp(x[j] - peak);
            total += y[j];
        }
        for (std::size_t j = 0; j < m; ++j) y[j] /= total;
    }
    return out;
}

template <typename T>
void softmax_rows_backward(const Tensor<T>& output, std::span<const T> grad_out,
                           std::span<T> grad_input) {
    const std::size_t n = output.dim(0), m = output.dim(1);
    for (std::size_t i = 0; i < n; ++i) {
        const T* y = output.data() + i * m;
        const T* g = grad_out.data() + i * m;
        T dot{};
        for (std::size_t j = 0; j < m; ++j) dot += g[j] * y[j];
        for (std::size_t j = 0; j < m; ++j) grad_input[i * m + j] += y[j] * (g[j] - dot);
    }
}

template <typename T>
Tensor<T> relu(const Tensor<T>& input) {
    Tensor<T> out(input.shape());
    for (std::size_t i = 0; i < input.size(); ++i) {
        out[i] = input[i] > T{} ? input[i] : T{};
    }
    return out;
}

template <typename T>
void relu_backward(const Tensor<T>& output, std::span<const T> grad_out, std::span<T> grad_input) {
    for (std::size_t i = 0; i < output.size(); ++i) {
        if (output[i] > T{}) {
            grad_input[i] += grad_out[i];
        }
    }
}

template <typename T>
T cross_entropy(const Tensor<T>& logits, std::span<const std::int32_t> labels) {
    check_rank(logits.shape(), 2, "cross_entropy logits");
    const std::size_t n = logits.dim(0), k = logits.dim(1);
    require(labels.size() == n, ErrorKind::dimension, "cross_entropy needs one label per row");
    T total{};
    for (std::size_t i = 0; i < n; ++i) {
        require(labels[i] >= 1 && static_cast<std::size_t>(labels[i]) <= k, ErrorKind::usage,
                "cross_entropy label " + std::to_string(labels[i]) + " outside 1.." +
                    std::to_string(k));
        const T* z = logits.data() + i * k;
        const T peak = *std::max_element(z, z + k);
        T sum{};
        for (std::size_t j = 0; j < k; ++j) sum += std::exp(z[j] - peak);
        total += peak + std::log(sum) - z[labels[i] - 1];
    }
    return total / static_cast<T>(n);
}

template <typename T>
void cross_entropy_backward(const Tensor<T>& logits, std::span<const std::int32_t> labels,
                            T grad_loss, std::span<T> grad_logits) {
    const std::size_t n = logits.dim(0), k = logits.dim(1);
    const T scale = grad_loss / static_cast<T>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const T* z = logits.data() + i * k;
        const T peak = *std::max_element(z, z + k);
        T sum{};
        for (std::size_t j = 0; j < k; ++j) sum += std::exp(z[j] - peak);
        for (std::size_t j = 0; j < k; ++j) {
            T p = std::exp(z[j] - peak) / sum;
            if (static_cast<std::int32_t>(j) == labels[i] - 1) p -= T{1};
            grad_logits[i * k + j] += scale * p;
        }
    }
}

#define MVT_INSTANTIATE_OPS(T)                                                                     \
    template Tensor<T> conv3d(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);               \
    template void conv3d_backward(const Tensor<T>&, const Tensor<T>&, std::span<const T>,          \
                                  std::span<T>, std::span<T>, std::span<T>);                       \
    template Tensor<T> conv2d(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);               \
    template void conv2d_backward(const Tensor<T>&, const Tensor<T>&, std::span<const T>,          \
                                  std::span<T>, std::span<T>, std::span<T>);                       \
    template Tensor<T> affine(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);               \
    template void affine_backward(const Tensor<T>&, const Tensor<T>&, std::span<const T>,          \
                                  std::span<T>, std::span<T>, std::span<T>);                       \
    template Tensor<T> matmul(const Tensor<T>&, const Tensor<T>&);                                 \
    template void matmul_backward(const Tensor<T>&, const Tensor<T>&, std::span<const T>,          \
                                  std::span<T>, std::span<T>);                                     \
    template Tensor<T> matmul_bt(const Tensor<T>&, const Tensor<T>&);                              \
    template void matmul_bt_backward(const Tensor<T>&, const Tensor<T>&, std::span<const T>,       \
                                     std::span<T>, std::span<T>);                                  \
    template Tensor<T> softmax_rows(const Tensor<T>&);                                             \
    template void softmax_rows_backward(const Tensor<T>&, std::span<const T>, std::span<T>);       \
    template Tensor<T> relu(const Tensor<T>&);                                                     \
    template void relu_backward(const Tensor<T>&, std::span<const T>, std::span<T>);               \
    template T cross_entropy(const Tensor<T>&, std::span<const std::int32_t>);                     \
    template void cross_entropy_backward(const Tensor<T>&, std::span<const std::int32_t>, T,       \
                                         std::span<T>);

MVT_INSTANTIATE_OPS(float)
MVT_INSTANTIATE_OPS(double)

#undef MVT_INSTANTIATE_OPS

}  // namespace mvt::ops
