#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "mvt/cube.hpp"
#include "mvt/hsz.hpp"
#include "mvt/patch.hpp"
#include "mvt/split.hpp"
#include "mvt/synth.hpp"

using namespace mvt;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "mvt_test_data";
    fs::create_directories(dir);
    return dir / name;
}

HsiCube ramp_cube(std::size_t h, std::size_t w, std::size_t b) {
    HsiCube cube{"ramp", Raster<float>(h, w, b)};
    for (std::size_t i = 0; i < cube.raster.values.size(); ++i) cube.raster.values[i] = float(i);
    return cube;
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::usage;
}

std::vector<char> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Hsz, CubeRoundTrip) {
    const auto path = scratch("rt.hsz");
    const HsiCube cube = ramp_cube(4, 3, 5);
    save_cube(cube, path);
    const HsiCube back = load_cube(path);
    EXPECT_EQ(back.raster, cube.raster);
    EXPECT_EQ(back.name, "rt");
}

TEST(Hsz, HeaderLayout) {
    const auto path = scratch("layout.hsz");
    save_cube(ramp_cube(2, 2, 2), path);
    const auto bytes = slurp(path);
    ASSERT_GE(bytes.size(), 12u);
    EXPECT_EQ(std::string(bytes.data(), 7), "HSZCUBE");
    EXPECT_EQ(bytes[7], '\0');
    const auto n = hsz::read_le<std::uint32_t>(reinterpret_cast<const std::byte*>(bytes.data() + 8));
    const auto header = nlohmann::json::parse(std::string(bytes.data() + 12, n));
    EXPECT_EQ(header["dtype"], "f32le");
    EXPECT_EQ(header["order"], "bip");
    EXPECT_EQ(header["bands"], 2);
    EXPECT_EQ(bytes.size(), 12 + n + 8 * sizeof(float));
}

TEST(Hsz, IndianPinesShapedCube) {
    const auto path = scratch("ip.hsz");
    HsiCube cube{"ip", Raster<float>(145, 145, 200)};
    std::mt19937 rng(3);
    std::uniform_real_distribution<float> u(1000, 9000);
    for (auto& v : cube.raster.values) v = u(rng);
    save_cube(cube, path);
    const HsiCube back = load_cube(path);
    EXPECT_EQ(back.height(), 145u);
    EXPECT_EQ(back.width(), 145u);
    EXPECT_EQ(back.bands(), 200u);
    EXPECT_EQ(back.raster.values, cube.raster.values);
}

TEST(Hsz, TruncatedPayloadIsLengthError) {
    const auto path = scratch("trunc.hsz");
    save_cube(ramp_cube(3, 3, 3), path);
    fs::resize_file(path, fs::file_size(path) - 4);
    EXPECT_EQ(kind_of([&] { load_cube(path); }), ErrorKind::length);
}

TEST(Hsz, WrongMagicIsParseError) {
    const auto path = scratch("magic.hsz");
    save_labels(LabelMap{1, 1, 1, {1}}, path);
    EXPECT_EQ(kind_of([&] { load_cube(path); }), ErrorKind::parse);
    EXPECT_EQ(kind_of([&] { load_cube(scratch("missing.hsz")); }), ErrorKind::io);
}

TEST(Hsz, NonFiniteValuesRejected) {
    const auto path = scratch("nan.hsz");
    HsiCube cube = ramp_cube(2, 2, 2);
    cube.raster.values[3] = std::nanf("");
    save_cube(cube, path);
    EXPECT_EQ(kind_of([&] { load_cube(path); }), ErrorKind::parse);
}

TEST(Labels, RoundTripAndCounts) {
    const auto path = scratch("labels.hsz");
    LabelMap labels{2, 3, 2, {0, 1, 1, 2, 0, 2}};
    save_labels(labels, path);
    const LabelMap back = load_labels(path);
    EXPECT_EQ(back, labels);
    EXPECT_EQ(back.labeled_count(), 4u);
    EXPECT_EQ(back.class_counts(), (std::vector<std::size_t>{2, 2, 2}));
    EXPECT_EQ(kind_of([] { validate_labels(LabelMap{1, 2, 1, {1, 2}}); }), ErrorKind::config);
}

TEST(MMNorm, GlobalMinMax) {
    HsiCube cube{"c", Raster<float>(1, 2, 2)};
    cube.raster.values = {2, 4, 6, 10};
    const HsiCube n = mmnorm(cube);
    EXPECT_EQ(n.raster.values, (std::vector<float>{0.0f, 0.25f, 0.5f, 1.0f}));
}

TEST(MMNorm, ConstantCubeIsDegenerate) {
    HsiCube cube{"c", Raster<float>(2, 2, 2)};
    std::fill(cube.raster.values.begin(), cube.raster.values.end(), 3.0f);
    EXPECT_EQ(kind_of([&] { mmnorm(cube); }), ErrorKind::degenerate);
}

TEST(Split, StratifiedCountsAndDisjointness) {
    LabelMap labels{10, 10, 3, std::vector<std::uint16_t>(100, 0)};
    for (std::size_t i = 0; i < 100; ++i) labels.ids[i] = std::uint16_t(i < 10 ? 0 : 1 + i % 3);
    const auto split = stratified_split(labels, {}, 7);
    std::size_t covered = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        EXPECT_EQ(split.assignment[i] == Split::none, labels.ids[i] == 0);
        covered += split.assignment[i] != Split::none;
    }
    EXPECT_EQ(covered, 90u);
    // 30 pixels per class: round(1.5) = 2 train, 2 val, 26 test.
    EXPECT_EQ(split.count(Split::train), 6u);
    EXPECT_EQ(split.count(Split::val), 6u);
    EXPECT_EQ(split.count(Split::test), 78u);
    EXPECT_EQ(stratified_split(labels, {}, 7).assignment, split.assignment);
    EXPECT_NE(stratified_split(labels, {}, 8).assignment, split.assignment);
}

TEST(Split, TinyClassesWarnAndKeepOneTrainPixel) {
    LabelMap labels{1, 4, 2, {1, 2, 2, 2}};
    const auto split = stratified_split(labels, {}, 0);
    EXPECT_EQ(split.assignment[0], Split::train);
    EXPECT_FALSE(split.warnings.empty());
    EXPECT_EQ(kind_of([&] { stratified_split(labels, {0.5, 0.5, 0.5}, 0); }), ErrorKind::config);
}

TEST(Patch, MatchesDirectSlice) {
    Raster<float> r(7, 6, 3);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = float(i + 1);
    for (std::size_t row : {0u, 3u, 6u}) {
        for (std::size_t col : {0u, 2u, 5u}) {
            const Patch p = extract_patch(r, row, col, 5, 2);
            EXPECT_EQ(p.values.shape(), (Shape{5, 5, 3}));
            EXPECT_EQ(p.label, 2);
            for (long i = 0; i < 5; ++i)
                for (long j = 0; j < 5; ++j)
                    for (std::size_t c = 0; c < 3; ++c) {
                        const long h = long(row) + i - 2, w = long(col) + j - 2;
                        const bool inside = h >= 0 && h < 7 && w >= 0 && w < 6;
                        EXPECT_EQ(p.values.at(i, j, c), inside ? r.at(h, w, c) : 0.0f);
                    }
        }
    }
    EXPECT_EQ(kind_of([&] { extract_patch(r, 7, 0, 5); }), ErrorKind::range);
    EXPECT_EQ(kind_of([&] { extract_patch(r, 0, 0, 4); }), ErrorKind::config);
}

TEST(Patch, RotationCommutesWithExtraction) {
    Raster<float> r(6, 5, 2);
    std::mt19937 rng(1);
    for (auto& v : r.values) v = float(rng() % 100);
    const Raster<float> rotated = rotate180(r);
    for (std::size_t row = 0; row < 6; ++row)
        for (std::size_t col = 0; col < 5; ++col) {
            const Patch a = rotate180(extract_patch(r, row, col, 3));
            const Patch b = extract_patch(rotated, 5 - row, 4 - col, 3);
            EXPECT_EQ(a.values, b.values);
        }
    const Tensor<float> t({2, 2, 1}, {1, 2, 3, 4});
    EXPECT_EQ(rotate180(t), (Tensor<float>({2, 2, 1}, {4, 3, 2, 1})));
    EXPECT_EQ(rotate180(rotate180(t)), t);
}

TEST(Synth, DeterministicAndSeedSensitive) {
    SynthOptions o;
    o.seed = 4;
    const SynthScene a = synth_scene(o), b = synth_scene(o);
    EXPECT_EQ(a.cube.raster, b.cube.raster);
    EXPECT_EQ(a.labels, b.labels);
    o.seed = 5;
    EXPECT_NE(synth_scene(o).cube.raster, a.cube.raster);
    EXPECT_EQ(a.labels.classes, 3u);
    EXPECT_NO_THROW(validate_labels(a.labels));
}

TEST(Synth, NoiselessClassesHaveIdenticalSpectra) {
    SynthOptions o;
    o.noise_sigma = 0.0;
    o.height = 16;
    o.width = 16;
    const SynthScene s = synth_scene(o);
    for (std::size_t i = 0; i < s.labels.ids.size(); ++i) {
        const std::size_t k = s.labels.ids[i];
        for (std::size_t b = 0; b < o.bands; ++b)
            EXPECT_EQ(s.cube.raster.values[i * o.bands + b], float(class_signature(b, k, o.bands, 3)));
    }
}

TEST(Synth, SignaturePeaks) {
    // K = 2, B = 40: peaks at bands 10 and 30.
    for (std::size_t k = 1; k <= 2; ++k) {
        std::size_t best = 0;
        for (std::size_t b = 1; b < 40; ++b)
            if (class_signature(b, k, 40, 2) > class_signature(best, k, 40, 2)) best = b;
        EXPECT_EQ(best, k == 1 ? 10u : 30u);
    }
}

TEST(Synth, Errors) {
    SynthOptions o;
    o.classes = 1;
    EXPECT_EQ(kind_of([&] { synth_scene(o); }), ErrorKind::config);
    o.classes = 5;
    o.height = 2;
    o.width = 2;
    EXPECT_EQ(kind_of([&] { synth_scene(o); }), ErrorKind::config);
}
