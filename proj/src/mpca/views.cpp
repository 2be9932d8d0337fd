#include "mvt/error.hpp"
#include "mvt/mpca.hpp"

namespace mvt {

ViewSpec make_view_spec(std::size_t bands, std::size_t num_views) {
    require(bands >= 1, ErrorKind::config, "cube must have at least one band");
    require(num_views >= 1, ErrorKind::config, "number of views must be at least 1");
    require(num_views <= bands, ErrorKind::config,
            "number of views " + std::to_string(num_views) + " exceeds band count " +
                std::to_string(bands));
    ViewSpec spec;
    spec.source_bands = bands;
    spec.num_views = num_views;
    spec.groups = (bands + num_views - 1) / num_views;
    spec.padded_bands = spec.groups * num_views;
    spec.band_indices.resize(num_views);
    for (std::size_t n = 0; n < num_views; ++n) {
        spec.band_indices[n].reserve(spec.groups);
        for (std::size_t m = 0; m < spec.groups; ++m) {
            spec.band_indices[n].push_back(m * num_views + n);
        }
    }
    return spec;
}

Views build_views(const HsiCube& cube, std::size_t num_views) {
    Views views;
    views.spec = make_view_spec(cube.bands(), num_views);
    const auto& src = cube.raster;
    const std::size_t m_count = views.spec.groups;
    views.rasters.reserve(num_views);
    for (std::size_t n = 0; n < num_views; ++n) {
        Raster<double> view(src.height, src.width, m_count);
        const auto& idx = views.spec.band_indices[n];
        for (std::size_t p = 0; p < src.pixels(); ++p) {
            const float* px = src.values.data() + p * src.channels;
            double* out = view.values.data() + p * m_count;
            for (std::size_t m = 0; m < m_count; ++m) {
                // Bands past the source count are the zero padding.
                out[m] = idx[m] < src.channels ? static_cast<double>(px[idx[m]]) : 0.0;
            }
        }
        views.rasters.push_back(std::move(view));
    }
    return views;
}

}  // namespace mvt
