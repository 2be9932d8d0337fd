#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mvt/raster.hpp"

namespace mvt {

// Raw hyperspectral image: H x W pixels, B bands of reflectance.
struct HsiCube {
    std::string name;
    Raster<float> raster;

    std::size_t height() const noexcept { return raster.height; }
    std::size_t width() const noexcept { return raster.width; }
    std::size_t bands() const noexcept { return raster.channels; }
};

// Per-pixel class ids, 0 = unlabeled, 1..classes otherwise. Row-major.
struct LabelMap {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t classes = 0;
    std::vector<std::uint16_t> ids;

    std::uint16_t at(std::size_t h, std::size_t w) const { return ids[h * width + w]; }
    std::size_t labeled_count() const;
    std::vector<std::size_t> class_counts() const;  // index 0 = unlabeled

    friend bool operator==(const LabelMap&, const LabelMap&) = default;
};

// Throws config error unless every id <= classes and every class 1..classes
// has at least one pixel.
void validate_labels(const LabelMap& labels);

HsiCube load_cube(const std::filesystem::path& path);
void save_cube(const HsiCube& cube, const std::filesystem::path& path);
// Writes any float raster with the cube framing.
void save_raster(const Raster<float>& raster, const std::filesystem::path& path);

LabelMap load_labels(const std::filesystem::path& path);
void save_labels(const LabelMap& labels, const std::filesystem::path& path);

// Global min-max rescale to [0, 1] with one min and one max over all values.
HsiCube mmnorm(const HsiCube& cube);

}  // namespace mvt
