#include "mvt/synth.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "mvt/error.hpp"
#include "mvt/rng.hpp"

namespace mvt {

double class_signature(std::size_t band, std::size_t klass, std::size_t bands, std::size_t classes) {
    const double b = static_cast<double>(bands);
    const double k = static_cast<double>(classes);
    const double mu = (static_cast<double>(klass) - 0.5) * b / k;
    const double sigma = b / (4.0 * k);
    const double dx = static_cast<double>(band) - mu;
    return std::exp(-dx * dx / (2.0 * sigma * sigma));
}

SynthScene synth_scene(const SynthOptions& opt) {
    require(opt.height > 0 && opt.width > 0, ErrorKind::config, "scene extents must be positive");
    require(opt.classes >= 2, ErrorKind::config, "synthetic scene needs at least 2 classes");
    require(opt.bands >= opt.classes, ErrorKind::config, "synthetic scene needs bands >= classes");
    require(opt.classes <= opt.height * opt.width, ErrorKind::config,
            "more classes than pixels in the synthetic scene");
    require(opt.classes <= std::numeric_limits<std::uint16_t>::max(), ErrorKind::config,
            "class count exceeds the label format");
    require(opt.noise_sigma >= 0 && std::isfinite(opt.noise_sigma), ErrorKind::config,
            "noise sigma must be finite and non-negative");

    const std::size_t pixels = opt.height * opt.width;

    // Distinct site pixels guarantee every class owns at least its own site.
    auto site_rng = make_rng(opt.seed, RngStream::synth_sites);
    std::vector<std::size_t> order(pixels);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::size_t> sites(opt.classes);
    for (std::size_t k = 0; k < opt.classes; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, pixels - 1);
        std::swap(order[k], order[pick(site_rng)]);
        sites[k] = order[k];
    }

    SynthScene scene;
    scene.labels.height = opt.height;
    scene.labels.width = opt.width;
    scene.labels.classes = opt.classes;
    scene.labels.ids.resize(pixels);
    for (std::size_t h = 0; h < opt.height; ++h) {
        for (std::size_t w = 0; w < opt.width; ++w) {
            std::size_t best = 0;
            long long best_d2 = std::numeric_limits<long long>::max();
            for (std::size_t k = 0; k < opt.classes; ++k) {
                const long long dh = static_cast<long long>(h) - static_cast<long long>(sites[k] / opt.width);
                const long long dw = static_cast<long long>(w) - static_cast<long long>(sites[k] % opt.width);
                const long long d2 = dh * dh + dw * dw;
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = k;
                }
            }
            scene.labels.ids[h * opt.width + w] = static_cast<std::uint16_t>(best + 1);
        }
    }

    std::vector<std::vector<double>> signatures(opt.classes, std::vector<double>(opt.bands));
    for (std::size_t k = 0; k < opt.classes; ++k) {
        for (std::size_t b = 0; b < opt.bands; ++b) {
            signatures[k][b] = class_signature(b, k + 1, opt.bands, opt.classes);
        }
    }

    scene.cube.name = "synthetic";
    scene.cube.raster = Raster<float>(opt.height, opt.width, opt.bands);
    auto noise_rng = make_rng(opt.seed, RngStream::synth_noise);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t p = 0; p < pixels; ++p) {
        const auto& sig = signatures[scene.labels.ids[p] - 1u];
        for (std::size_t b = 0; b < opt.bands; ++b) {
            double v = sig[b];
            if (opt.noise_sigma > 0) v += opt.noise_sigma * noise(noise_rng);
            scene.cube.raster.values[p * opt.bands + b] = static_cast<float>(v);
        }
    }
    return scene;
}

}  // namespace mvt
