#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. Written for clarity, not speed; they share no code with the
// library kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "mvt/raster.hpp"
#include "mvt/tensor.hpp"

namespace oracle {

using LD = long double;

template <typename T>
void fill_uniform(mvt::Tensor<T>& t, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    for (auto& v : t.values()) v = static_cast<T>(u(rng));
}

template <typename T>
mvt::Tensor<T> random_tensor(mvt::Shape shape, std::mt19937_64& rng, double lo = -1.0,
                             double hi = 1.0) {
    mvt::Tensor<T> t(std::move(shape));
    fill_uniform(t, rng, lo, hi);
    return t;
}

// out[h][w][k*C + c] = b[k] + sum K[k][i][j][l] * x[h+i-r1][w+j-r2][c+l-r3], zero outside.
inline std::vector<LD> conv3d(const mvt::Tensor<double>& x, const mvt::Tensor<double>& kern,
                              const mvt::Tensor<double>& bias) {
    const long H = long(x.dim(0)), W = long(x.dim(1)), C = long(x.dim(2));
    const long K = long(kern.dim(0)), k1 = long(kern.dim(1)), k2 = long(kern.dim(2)),
               k3 = long(kern.dim(3));
    std::vector<LD> out(std::size_t(H * W * K * C), 0.0L);
    for (long h = 0; h < H; ++h)
        for (long w = 0; w < W; ++w)
            for (long k = 0; k < K; ++k)
                for (long c = 0; c < C; ++c) {
                    LD acc = bias[std::size_t(k)];
                    for (long i = 0; i < k1; ++i)
                        for (long j = 0; j < k2; ++j)
                            for (long l = 0; l < k3; ++l) {
                                const long hh = h + i - k1 / 2, ww = w + j - k2 / 2, cc = c + l - k3 / 2;
                                if (hh < 0 || hh >= H || ww < 0 || ww >= W || cc < 0 || cc >= C) continue;
                                acc += LD(kern[std::size_t(((k * k1 + i) * k2 + j) * k3 + l)]) *
                                       LD(x[std::size_t((hh * W + ww) * C + cc)]);
                            }
                    out[std::size_t((h * W + w) * K * C + k * C + c)] = acc;
                }
    return out;
}

// out[h][w][o] = b[o] + sum K[o][i][j][c] * x[h+i-r][w+j-r][c], zero outside.
inline std::vector<LD> conv2d(const mvt::Tensor<double>& x, const mvt::Tensor<double>& kern,
                              const mvt::Tensor<double>& bias) {
    const long H = long(x.dim(0)), W = long(x.dim(1)), C = long(x.dim(2));
    const long O = long(kern.dim(0)), k1 = long(kern.dim(1)), k2 = long(kern.dim(2));
    std::vector<LD> out(std::size_t(H * W * O), 0.0L);
    for (long h = 0; h < H; ++h)
        for (long w = 0; w < W; ++w)
            for (long o = 0; o < O; ++o) {
                LD acc = bias[std::size_t(o)];
                for (long i = 0; i < k1; ++i)
                    for (long j = 0; j < k2; ++j) {
                        const long hh = h + i - k1 / 2, ww = w + j - k2 / 2;
                        if (hh < 0 || hh >= H || ww < 0 || ww >= W) continue;
                        for (long c = 0; c < C; ++c) {
                            acc += LD(kern[std::size_t(((o * k1 + i) * k2 + j) * C + c)]) *
                                   LD(x[std::size_t((hh * W + ww) * C + c)]);
                        }
                    }
                out[std::size_t((h * W + w) * O + o)] = acc;
            }
    return out;
}

inline std::vector<LD> softmax(std::span<const double> row) {
    std::vector<LD> e(row.size());
    LD sum = 0.0L;
    for (std::size_t i = 0; i < row.size(); ++i) {
        e[i] = std::exp(LD(row[i]));
        sum += e[i];
    }
    for (auto& v : e) v /= sum;
    return e;
}

// -log softmax(row)[label - 1], computed directly (no max shift).
inline LD cross_entropy(std::span<const double> row, std::int32_t label) {
    LD sum = 0.0L;
    for (double v : row) sum += std::exp(LD(v));
    return std::log(sum) - LD(row[std::size_t(label - 1)]);
}

struct Eigen {
    std::vector<LD> values;                // descending
    std::vector<std::vector<LD>> vectors;  // vectors[k] is the k-th eigenvector
};

// Cyclic Jacobi rotations on a symmetric n x n matrix (row-major), then sort
// descending and flip each vector so its largest-magnitude entry is
// positive (first index on ties).
inline Eigen jacobi(std::vector<LD> a, std::size_t n) {
    std::vector<LD> v(n * n, 0.0L);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0L;
    for (int sweep = 0; sweep < 100; ++sweep) {
        LD off = 0.0L;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        if (off < 1e-60L) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const LD apq = a[p * n + q];
                if (std::fabs(apq) < 1e-300L) continue;
                const LD theta = (a[q * n + q] - a[p * n + p]) / (2.0L * apq);
                const LD t = (theta >= 0 ? 1.0L : -1.0L) /
                             (std::fabs(theta) + std::sqrt(theta * theta + 1.0L));
                const LD c = 1.0L / std::sqrt(t * t + 1.0L), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const LD akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const LD apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const LD vkp = v[k * n + p], vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });
    Eigen out;
    for (std::size_t k : order) {
        out.values.push_back(a[k * n + k]);
        std::vector<LD> vec(n);
        for (std::size_t i = 0; i < n; ++i) vec[i] = v[i * n + k];
        std::size_t big = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::fabs(vec[i]) > std::fabs(vec[big])) big = i;
        if (vec[big] < 0)
            for (auto& x : vec) x = -x;
        out.vectors.push_back(std::move(vec));
    }
    return out;
}

struct PcaReference {
    std::vector<LD> mean;
    Eigen eigen;
    std::vector<LD> projected;  // N x d
};

// Mean-centre, N - 1 covariance, Jacobi, project onto the top d axes.
inline PcaReference pca(const mvt::Raster<double>& view, std::size_t d) {
    const std::size_t n = view.pixels(), m = view.channels;
    PcaReference r;
    r.mean.assign(m, 0.0L);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t b = 0; b < m; ++b) r.mean[b] += LD(view.values[p * m + b]);
    for (auto& v : r.mean) v /= LD(n);
    std::vector<LD> cov(m * m, 0.0L);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                cov[i * m + j] += (LD(view.values[p * m + i]) - r.mean[i]) *
                                  (LD(view.values[p * m + j]) - r.mean[j]);
    for (auto& v : cov) v /= LD(n - 1);
    r.eigen = jacobi(cov, m);
    r.projected.assign(n * d, 0.0L);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t k = 0; k < d; ++k) {
            LD acc = 0.0L;
            for (std::size_t b = 0; b < m; ++b)
                acc += (LD(view.values[p * m + b]) - r.mean[b]) * r.eigen.vectors[k][b];
            r.projected[p * d + k] = acc;
        }
    return r;
}

}  // namespace oracle
