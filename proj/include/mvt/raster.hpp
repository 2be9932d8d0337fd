#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mvt {

// H x W x C raster, band-interleaved by pixel: index = (h * W + w) * C + c.
template <typename T>
struct Raster {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 0;
    std::vector<T> values;

    Raster() = default;
    Raster(std::size_t h, std::size_t w, std::size_t c)
        : height(h), width(w), channels(c), values(h * w * c, T{}) {}

    std::size_t pixels() const noexcept { return height * width; }

    T& at(std::size_t h, std::size_t w, std::size_t c) {
        return values[(h * width + w) * channels + c];
    }
    const T& at(std::size_t h, std::size_t w, std::size_t c) const {
        return values[(h * width + w) * channels + c];
    }

    std::span<T> pixel(std::size_t h, std::size_t w) {
        return std::span<T>(values).subspan((h * width + w) * channels, channels);
    }
    std::span<const T> pixel(std::size_t h, std::size_t w) const {
        return std::span<const T>(values).subspan((h * width + w) * channels, channels);
    }

    friend bool operator==(const Raster&, const Raster&) = default;
};

}  // namespace mvt
