#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mvt/cube.hpp"

namespace mvt {

using Rgb = std::array<std::uint8_t, 3>;

// HSV(360 (c - 1) / K, 1, 1) through the sexant formula, channels rounded to
// 0..255. Class 0 (unlabeled) is black.
Rgb class_color(std::size_t klass, std::size_t num_classes);

// H x W x 3 bytes: predicted[i] colours pixel i where the label map has a
// label, black elsewhere.
std::vector<std::uint8_t> render_class_map(const LabelMap& labels,
                                           std::span<const std::int32_t> predicted);

// Binary PPM (P6, maxval 255).
void write_ppm(const std::filesystem::path& path, std::size_t height, std::size_t width,
               std::span<const std::uint8_t> rgb);

}  // namespace mvt
