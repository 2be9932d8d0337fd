#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "mvt/error.hpp"
#include "mvt/mpca.hpp"

namespace mvt {

PcaModel fit_pca(const Raster<double>& view, std::size_t components) {
    const std::size_t bands = view.channels;
    const std::size_t n = view.pixels();
    require(components >= 1, ErrorKind::config, "PCA needs at least one component");
    require(components <= bands, ErrorKind::config,
            "PCA components " + std::to_string(components) + " exceed view bands " +
                std::to_string(bands));
    require(n >= 2, ErrorKind::degenerate, "PCA needs at least two pixels");

    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMatrix> samples(view.values.data(), static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(bands));
    const Eigen::RowVectorXd mean = samples.colwise().mean();
    const RowMatrix centered = samples.rowwise() - mean;
    const Eigen::MatrixXd cov =
        (centered.transpose() * centered) / static_cast<double>(n - 1);
    require(cov.trace() > 0.0, ErrorKind::degenerate, "view has zero variance (all pixels equal)");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    require(solver.info() == Eigen::Success, ErrorKind::degenerate,
            "symmetric eigendecomposition did not converge");

    PcaModel model;
    model.bands = bands;
    model.components = components;
    model.mean.assign(mean.data(), mean.data() + bands);
    model.projection.assign(bands * components, 0.0);
    model.eigenvalues.resize(components);
    // Eigen returns ascending eigenvalues.
    for (std::size_t k = 0; k < components; ++k) {
        const auto col = static_cast<Eigen::Index>(bands - 1 - k);
        Eigen::VectorXd v = solver.eigenvectors().col(col);
        Eigen::Index peak = 0;
        for (Eigen::Index i = 1; i < v.size(); ++i) {
            if (std::abs(v[i]) > std::abs(v[peak])) peak = i;
        }
        if (v[peak] < 0) v = -v;
        for (std::size_t b = 0; b < bands; ++b) {
            model.projection[b * components + k] = v[static_cast<Eigen::Index>(b)];
        }
        model.eigenvalues[k] = std::max(0.0, solver.eigenvalues()[col]);
    }
    return model;
}

void project(const PcaModel& model, std::span<const double> spectrum, std::span<double> out) {
    require(spectrum.size() == model.bands, ErrorKind::dimension,
            "spectrum has " + std::to_string(spectrum.size()) + " bands, model expects " +
                std::to_string(model.bands));
    require(out.size() == model.components, ErrorKind::dimension, "projection output size mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t b = 0; b < model.bands; ++b) {
        const double centered = spectrum[b] - model.mean[b];
        const double* row = model.projection.data() + b * model.components;
        for (std::size_t k = 0; k < model.components; ++k) out[k] += row[k] * centered;
    }
}

Raster<double> transform_view(const Raster<double>& view, const PcaModel& model) {
    require(view.channels == model.bands, ErrorKind::dimension,
            "view has " + std::to_string(view.channels) + " bands, model expects " +
                std::to_string(model.bands));
    Raster<double> out(view.height, view.width, model.components);
    for (std::size_t h = 0; h < view.height; ++h) {
        for (std::size_t w = 0; w < view.width; ++w) {
            project(model, view.pixel(h, w), out.pixel(h, w));
        }
    }
    return out;
}

}  // namespace mvt
