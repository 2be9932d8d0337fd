#pragma once

#include <cstdint>

#include "mvt/raster.hpp"
#include "mvt/tensor.hpp"

namespace mvt {

// P x P x C window centred on (row, col) of a source raster.
struct Patch {
    Tensor<float> values;
    std::size_t row = 0;
    std::size_t col = 0;
    std::int32_t label = 0;

    std::size_t size() const { return values.dim(0); }
};

// Rows row-P/2 .. row+P/2 (columns likewise); positions outside the raster
// are zero. Throws range error if (row, col) is outside the raster and config
// error if P is even or zero.
Patch extract_patch(const Raster<float>& source, std::size_t row, std::size_t col, std::size_t size,
                    std::int32_t label = 0);

// Reverses both spatial axes of a rank-3 tensor; the channel axis is untouched.
template <typename T>
Tensor<T> rotate180(const Tensor<T>& cuboid) {
    require(cuboid.rank() == 3, ErrorKind::dimension, "rotate180 needs a rank-3 cuboid");
    const std::size_t rows = cuboid.dim(0), cols = cuboid.dim(1), chans = cuboid.dim(2);
    Tensor<T> out(cuboid.shape());
    for (std::size_t h = 0; h < rows; ++h) {
        for (std::size_t w = 0; w < cols; ++w) {
            const T* src = cuboid.data() + (h * cols + w) * chans;
            T* dst = out.data() + ((rows - 1 - h) * cols + (cols - 1 - w)) * chans;
            std::copy_n(src, chans, dst);
        }
    }
    return out;
}

Patch rotate180(const Patch& patch);

// Whole-raster 180 degree rotation (used to cross-check patch rotation).
Raster<float> rotate180(const Raster<float>& raster);

}  // namespace mvt
