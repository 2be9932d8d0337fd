#include "mvt/patch.hpp"

#include <algorithm>

namespace mvt {

Patch extract_patch(const Raster<float>& source, std::size_t row, std::size_t col, std::size_t size,
                    std::int32_t label) {
    require(size % 2 == 1, ErrorKind::config,
            "patch size must be odd, got " + std::to_string(size));
    require(row < source.height && col < source.width, ErrorKind::range,
            "patch centre (" + std::to_string(row) + ", " + std::to_string(col) +
                ") outside raster " + std::to_string(source.height) + "x" +
                std::to_string(source.width));
    const auto half = static_cast<std::ptrdiff_t>(size / 2);
    const std::size_t chans = source.channels;
    Patch patch;
    patch.values = Tensor<float>({size, size, chans});
    patch.row = row;
    patch.col = col;
    patch.label = label;
    for (std::size_t i = 0; i < size; ++i) {
        const auto h = static_cast<std::ptrdiff_t>(row) - half + static_cast<std::ptrdiff_t>(i);
        if (h < 0 || h >= static_cast<std::ptrdiff_t>(source.height)) continue;
        for (std::size_t j = 0; j < size; ++j) {
            const auto w = static_cast<std::ptrdiff_t>(col) - half + static_cast<std::ptrdiff_t>(j);
            if (w < 0 || w >= static_cast<std::ptrdiff_t>(source.width)) continue;
            const auto px = source.pixel(static_cast<std::size_t>(h), static_cast<std::size_t>(w));
            std::copy(px.begin(), px.end(), patch.values.data() + (i * size + j) * chans);
        }
    }
    return patch;
}

Patch rotate180(const Patch& patch) {
    Patch out = patch;
    out.values = rotate180(patch.values);
    return out;
}

Raster<float> rotate180(const Raster<float>& raster) {
    Raster<float> out(raster.height, raster.width, raster.channels);
    for (std::size_t h = 0; h < raster.height; ++h) {
        for (std::size_t w = 0; w < raster.width; ++w) {
            const auto src = raster.pixel(h, w);
            std::copy(src.begin(), src.end(),
                      out.pixel(raster.height - 1 - h, raster.width - 1 - w).begin());
        }
    }
    return out;
}

}  // namespace mvt
