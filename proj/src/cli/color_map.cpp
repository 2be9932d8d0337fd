#include <cmath>
#include <fstream>
#include <string>

#include "mvt/color_map.hpp"
#include "mvt/error.hpp"

namespace mvt {

Rgb class_color(std::size_t klass, std::size_t num_classes) {
    if (klass == 0) return {0, 0, 0};
    require(klass <= num_classes, ErrorKind::range,
            "class " + std::to_string(klass) + " outside 1.." + std::to_string(num_classes));
    const double hue = 360.0 * static_cast<double>(klass - 1) / static_cast<double>(num_classes);
    const double h = hue / 60.0;
    const int sexant = static_cast<int>(std::floor(h)) % 6;
    const double x = 1.0 - std::abs(std::fmod(h, 2.0) - 1.0);
    double r = 0, g = 0, b = 0;
    switch (sexant) {
        case 0: r = 1; g = x; break;
        case 1: r = x; g = 1; break;
        case 2: g = 1; b = x; break;
        case 3: g = x; b = 1; break;
        case 4: r = x; b = 1; break;
        default: r = 1; b = x; break;
    }
    auto byte = [](double v) { return static_cast<std::uint8_t>(std::lround(v * 255.0)); };
    return {byte(r), byte(g), byte(b)};
}

std::vector<std::uint8_t> render_class_map(const LabelMap& labels,
                                           std::span<const std::int32_t> predicted) {
    require(predicted.size() == labels.ids.size(), ErrorKind::dimension,
            "prediction count does not match the label raster");
    std::vector<std::uint8_t> rgb(labels.ids.size() * 3, 0);
    for (std::size_t i = 0; i < labels.ids.size(); ++i) {
        if (labels.ids[i] == 0) continue;
        const auto c = class_color(static_cast<std::size_t>(predicted[i]), labels.classes);
        std::copy(c.begin(), c.end(), rgb.begin() + static_cast<std::ptrdiff_t>(i * 3));
    }
    return rgb;
}

void write_ppm(const std::filesystem::path& path, std::size_t height, std::size_t width,
               std::span<const std::uint8_t> rgb) {
    require(rgb.size() == height * width * 3, ErrorKind::dimension,
            "PPM buffer does not hold H x W x 3 bytes");
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::io, "cannot open " + path.string() + " for writing");
    out << "P6\n" << width << ' ' << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
    require(static_cast<bool>(out), ErrorKind::io, "failed writing " + path.string());
}

}  // namespace mvt
