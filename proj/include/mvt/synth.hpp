#pragma once

#include <cstdint>

#include "mvt/cube.hpp"

namespace mvt {

struct SynthOptions {
    std::uint64_t seed = 0;
    std::size_t height = 64;
    std::size_t width = 64;
    std::size_t bands = 40;
    std::size_t classes = 3;
    double noise_sigma = 0.01;
};

struct SynthScene {
    HsiCube cube;
    LabelMap labels;
};

// Voronoi scene: `classes` distinct seeded sites partition the raster
// (nearest site, ties to the lower class id). Class k (1-based) has the
// Gaussian signature exp(-(b - mu_k)^2 / (2 s^2)), mu_k = (k - 0.5) B / K,
// s = B / (4K), plus i.i.d. N(0, noise_sigma) per value.
SynthScene synth_scene(const SynthOptions& options);

double class_signature(std::size_t band, std::size_t klass, std::size_t bands, std::size_t classes);

}  // namespace mvt
