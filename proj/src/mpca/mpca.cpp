#include "mvt/error.hpp"
#include "mvt/mpca.hpp"

namespace mvt {

MpcaResult mpca(const HsiCube& cube, std::size_t num_views, std::size_t components) {
    Views views = build_views(cube, num_views);
    MpcaResult result;
    result.spec = views.spec;
    result.representation.num_views = num_views;
    result.representation.components = components;
    auto& out = result.representation.raster;
    out = Raster<float>(cube.height(), cube.width(), num_views * components);
    result.models.reserve(num_views);
    for (std::size_t n = 0; n < num_views; ++n) {
        PcaModel model = fit_pca(views.rasters[n], components);
        const Raster<double> reduced = transform_view(views.rasters[n], model);
        for (std::size_t p = 0; p < out.pixels(); ++p) {
            for (std::size_t k = 0; k < components; ++k) {
                out.values[p * out.channels + n * components + k] =
                    static_cast<float>(reduced.values[p * components + k]);
            }
        }
        result.models.push_back(std::move(model));
    }
    return result;
}

MpcaResult plain_pca(const HsiCube& cube, std::size_t components) {
    return mpca(cube, 1, components);
}

PcaBundle bundle_of(const MpcaResult& result) {
    PcaBundle bundle;
    bundle.source_bands = result.spec.source_bands;
    bundle.num_views = result.spec.num_views;
    bundle.groups = result.spec.groups;
    bundle.components = result.representation.components;
    bundle.models = result.models;
    return bundle;
}

}  // namespace mvt
