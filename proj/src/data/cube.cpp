#include "mvt/cube.hpp"

#include <algorithm>
#include <cmath>

#include "mvt/error.hpp"
#include "mvt/hsz.hpp"

namespace mvt {

std::size_t LabelMap::labeled_count() const {
    return static_cast<std::size_t>(std::count_if(ids.begin(), ids.end(),
                                                  [](std::uint16_t id) { return id != 0; }));
}

std::vector<std::size_t> LabelMap::class_counts() const {
    std::vector<std::size_t> counts(classes + 1, 0);
    for (std::uint16_t id : ids) {
        if (id <= classes) ++counts[id];
    }
    return counts;
}

void validate_labels(const LabelMap& labels) {
    require(labels.ids.size() == labels.height * labels.width, ErrorKind::dimension,
            "label raster size does not match its height x width");
    require(labels.classes >= 1, ErrorKind::config, "label map must declare at least one class");
    for (std::uint16_t id : labels.ids) {
        require(id <= labels.classes, ErrorKind::config,
                "label id " + std::to_string(id) + " exceeds class count " +
                    std::to_string(labels.classes));
    }
    const auto counts = labels.class_counts();
    for (std::size_t c = 1; c <= labels.classes; ++c) {
        require(counts[c] > 0, ErrorKind::config,
                "class " + std::to_string(c) + " has no labeled pixel");
    }
}

HsiCube load_cube(const std::filesystem::path& path) {
    auto frame = hsz::read_frame(path, hsz::cube_magic);
    const auto h = hsz::header_size(frame.header, "height");
    const auto w = hsz::header_size(frame.header, "width");
    const auto b = hsz::header_size(frame.header, "bands");
    require(h > 0 && w > 0 && b > 0, ErrorKind::parse, path.string() + ": zero extent in header");
    require(frame.header.value("dtype", "") == "f32le", ErrorKind::parse,
            path.string() + ": unsupported dtype (expected f32le)");
    require(frame.header.value("order", "") == "bip", ErrorKind::parse,
            path.string() + ": unsupported order (expected bip)");
    const std::size_t expected = h * w * b * sizeof(float);
    require(frame.payload.size() == expected, ErrorKind::length,
            path.string() + ": payload has " + std::to_string(frame.payload.size()) +
                " bytes, header implies " + std::to_string(expected));

    HsiCube cube;
    cube.name = path.stem().string();
    cube.raster = Raster<float>(h, w, b);
    for (std::size_t i = 0; i < cube.raster.values.size(); ++i) {
        cube.raster.values[i] = hsz::read_le<float>(frame.payload.data() + i * sizeof(float));
        require(std::isfinite(cube.raster.values[i]), ErrorKind::parse,
                path.string() + ": non-finite value at scalar " + std::to_string(i));
    }
    return cube;
}

void save_raster(const Raster<float>& raster, const std::filesystem::path& path) {
    nlohmann::ordered_json header;
    header["height"] = raster.height;
    header["width"] = raster.width;
    header["bands"] = raster.channels;
    header["dtype"] = "f32le";
    header["order"] = "bip";
    std::vector<std::byte> payload;
    payload.reserve(raster.values.size() * sizeof(float));
    for (float v : raster.values) hsz::append_le(payload, v);
    hsz::write_frame(path, hsz::cube_magic, header, payload);
}

void save_cube(const HsiCube& cube, const std::filesystem::path& path) {
    save_raster(cube.raster, path);
}

LabelMap load_labels(const std::filesystem::path& path) {
    auto frame = hsz::read_frame(path, hsz::label_magic);
    LabelMap labels;
    labels.height = hsz::header_size(frame.header, "height");
    labels.width = hsz::header_size(frame.header, "width");
    labels.classes = hsz::header_size(frame.header, "classes");
    const std::size_t expected = labels.height * labels.width * sizeof(std::uint16_t);
    require(frame.payload.size() == expected, ErrorKind::length,
            path.string() + ": payload has " + std::to_string(frame.payload.size()) +
                " bytes, header implies " + std::to_string(expected));
    labels.ids.resize(labels.height * labels.width);
    for (std::size_t i = 0; i < labels.ids.size(); ++i) {
        labels.ids[i] = hsz::read_le<std::uint16_t>(frame.payload.data() + i * 2);
    }
    validate_labels(labels);
    return labels;
}

void save_labels(const LabelMap& labels, const std::filesystem::path& path) {
    nlohmann::ordered_json header;
    header["height"] = labels.height;
    header["width"] = labels.width;
    header["classes"] = labels.classes;
    std::vector<std::byte> payload;
    payload.reserve(labels.ids.size() * 2);
    for (std::uint16_t id : labels.ids) hsz::append_le(payload, id);
    hsz::write_frame(path, hsz::label_magic, header, payload);
}

HsiCube mmnorm(const HsiCube& cube) {
    const auto& v = cube.raster.values;
    require(!v.empty(), ErrorKind::degenerate, "mmnorm on an empty cube");
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    require(std::isfinite(lo) && std::isfinite(hi), ErrorKind::degenerate,
            "cube contains non-finite values");
    require(hi > lo, ErrorKind::degenerate, "mmnorm on a constant cube (max == min)");
    HsiCube out = cube;
    const double span = hi - lo;
    for (float& x : out.raster.values) {
        x = static_cast<float>((static_cast<double>(x) - lo) / span);
    }
    return out;
}

}  // namespace mvt
