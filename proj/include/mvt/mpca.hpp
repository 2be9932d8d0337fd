#pragma once

#include <filesystem>
#include <vector>

#include "mvt/cube.hpp"
#include "mvt/raster.hpp"

namespace mvt {

// Band bookkeeping for g interleaved views over a cube zero-padded to
// M * g bands, M = ceil(B / g). Group m holds bands [m g, (m + 1) g); view n
// takes the n-th band of every group, so its indices are n, n + g, n + 2g, ...
struct ViewSpec {
    std::size_t source_bands = 0;
    std::size_t num_views = 0;
    std::size_t groups = 0;
    std::size_t padded_bands = 0;
    std::vector<std::vector<std::size_t>> band_indices;  // [view][group]
};

ViewSpec make_view_spec(std::size_t bands, std::size_t num_views);

struct Views {
    ViewSpec spec;
    std::vector<Raster<double>> rasters;  // each H x W x M
};

// Throws config error if g == 0 or g > B.
Views build_views(const HsiCube& cube, std::size_t num_views);

// Principal axes of one view. projection is M x d row-major (band-major):
// projection[b * d + k] is entry b of eigenvector k. Eigenvectors are sorted
// by descending eigenvalue; each has its largest-magnitude entry positive
// (first such index on ties).
struct PcaModel {
    std::size_t bands = 0;
    std::size_t components = 0;
    std::vector<double> mean;
    std::vector<double> projection;
    std::vector<double> eigenvalues;

    double axis(std::size_t band, std::size_t component) const {
        return projection[band * components + component];
    }

    friend bool operator==(const PcaModel&, const PcaModel&) = default;
};

// Fits on every pixel with the N - 1 covariance divisor. Throws config error
// if d > M or d == 0, degenerate error if the view has zero variance or
// fewer than two pixels.
PcaModel fit_pca(const Raster<double>& view, std::size_t components);

// Projects one spectrum: out = projection^T (x - mean).
void project(const PcaModel& model, std::span<const double> spectrum, std::span<double> out);

// H x W x d raster of projections. Throws dimension error on band mismatch.
Raster<double> transform_view(const Raster<double>& view, const PcaModel& model);

// H x W x (g * d) raster, view-major channel layout.
struct MultiviewRepresentation {
    std::size_t num_views = 0;
    std::size_t components = 0;
    Raster<float> raster;

    std::size_t channels() const noexcept { return raster.channels; }
};

struct MpcaResult {
    ViewSpec spec;
    MultiviewRepresentation representation;
    std::vector<PcaModel> models;
};

// build_views -> fit_pca -> transform_view -> channel concatenation. The cube
// is expected to be normalized already.
MpcaResult mpca(const HsiCube& cube, std::size_t num_views, std::size_t components);

// Plain PCA over all bands (the single-view case); used for the no-MPCA
// ablation with the same output width.
MpcaResult plain_pca(const HsiCube& cube, std::size_t components);

struct PcaBundle {
    std::size_t source_bands = 0;
    std::size_t num_views = 0;
    std::size_t groups = 0;
    std::size_t components = 0;
    std::vector<PcaModel> models;

    friend bool operator==(const PcaBundle&, const PcaBundle&) = default;
};

PcaBundle bundle_of(const MpcaResult& result);

// HSZPCA framing; per view in order: mean[M], projection[M x d] band-major,
// eigenvalues[d], all little-endian float64.
void save_pca(const PcaBundle& bundle, const std::filesystem::path& path);
PcaBundle load_pca(const std::filesystem::path& path);

}  // namespace mvt
