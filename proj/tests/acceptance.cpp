// Acceptance suite: one PASS / FAIL / SKIP line per criterion.
//
//   acceptance [--only N[,N...]] [--ip-cube PATH --ip-labels PATH]
//
// Criterion 8 needs a converted Indian Pines scene and is skipped otherwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvt/gradcheck.hpp"
#include "mvt/mpca.hpp"
#include "mvt/patch.hpp"
#include "mvt/synth.hpp"
#include "mvt/train.hpp"
#include "support/oracles.hpp"

using namespace mvt;

namespace {

enum class Outcome { pass, fail, skip };

struct Verdict {
    Outcome outcome;
    std::string detail;
};

Verdict verdict(bool ok, std::string detail) {
    return {ok ? Outcome::pass : Outcome::fail, std::move(detail)};
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// ---------------------------------------------------------------- 1

// ReLU on/off pattern of every SED layer for one forward pass.
std::vector<bool> relu_pattern(const ForwardTrace<double>& t) {
    std::vector<bool> mask;
    for (const auto& layer : {t.sed_expanded, t.sed_encoded, t.features})
        for (double v : layer->values()) mask.push_back(v > 0);
    return mask;
}

struct GradientTrial {
    GradCheckReport report;
    std::size_t tensors = 0;
    bool kink_crossed = false;  // some perturbation flipped a ReLU
};

GradientTrial gradient_trial(std::uint64_t seed) {
    ModelConfig c;
    c.patch_size = 3;
    c.num_views = 4;
    c.view_components = 2;
    c.mid_channels = 4;
    c.feature_channels = 8;
    c.heads = 2;
    c.feature_dim = 8;
    c.num_classes = 3;
    auto params = init_params<double>(c, seed);
    std::mt19937_64 rng(100 + seed);
    for (auto* b : {&params.conv3d_bias, &params.mid_bias, &params.out_bias, &params.feature_bias,
                    &params.classifier_bias})
        oracle::fill_uniform(**b, rng, -0.1, 0.1);
    std::vector<TensorPtr<double>> patches;
    for (int i = 0; i < 3; ++i)
        patches.push_back(make_tensor(oracle::random_tensor<double>({3, 3, 8}, rng, 0, 1)));
    const std::vector<std::int32_t> labels{1, 2, 3};

    GradientTrial trial;
    std::vector<bool> base;
    auto loss = [&](GradGraph<double>& g) {
        TensorPtr<double> total;
        std::vector<bool> pattern;
        for (std::size_t i = 0; i < patches.size(); ++i) {
            ForwardTrace<double> t;
            auto l = g.cross_entropy(forward(g, c, params, patches[i], &t), {labels[i]});
            const auto m = relu_pattern(t);
            pattern.insert(pattern.end(), m.begin(), m.end());
            total = total ? g.add(total, l) : l;
        }
        if (g.recording()) base = pattern;
        else trial.kink_crossed = trial.kink_crossed || pattern != base;
        return total;
    };
    std::vector<NamedParam> named;
    for (auto& [name, t] : params.named()) named.push_back({name, t});
    trial.tensors = named.size();
    trial.report = check_gradients(loss, named);
    return trial;
}

// Central differences only approximate the derivative when no ReLU changes
// state inside the +-eps stencil, so the first seeded point meeting that
// precondition is the one judged.
Verdict gradient_fidelity() {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const GradientTrial t = gradient_trial(seed);
        if (t.kink_crossed) continue;
        std::string worst;
        double w = -1;
        for (const auto& p : t.report.params)
            if (p.max_rel_error > w) {
                w = p.max_rel_error;
                worst = p.name;
            }
        return verdict(t.report.passed && t.report.max_rel_error < 1e-4,
                       std::to_string(t.tensors) + " tensors, max rel err " +
                           fmt("%.2e", t.report.max_rel_error) + " (" + worst + "), point " +
                           std::to_string(seed) + " (" + std::to_string(seed - 1) +
                           " rejected for ReLU crossings)");
    }
    return {Outcome::fail, "no kink-free evaluation point among 20 seeds"};
}

// ---------------------------------------------------------------- 2

Verdict pca_oracle() {
    std::mt19937_64 rng(202);
    std::uniform_int_distribution<std::size_t> bands(4, 12);
    std::normal_distribution<double> z(0.0, 1.0);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = bands(rng), n = 200;
        std::vector<double> mix(m * m);
        for (auto& v : mix) v = z(rng);
        Raster<double> view(1, n, m);
        for (std::size_t p = 0; p < n; ++p) {
            std::vector<double> s(m);
            for (auto& v : s) v = z(rng);
            for (std::size_t b = 0; b < m; ++b) {
                double acc = double(b);
                for (std::size_t k = 0; k < m; ++k) acc += mix[b * m + k] * s[k];
                view.values[p * m + b] = acc;
            }
        }
        const PcaModel model = fit_pca(view, 3);
        const Raster<double> got = transform_view(view, model);
        const auto ref = oracle::pca(view, 3);
        for (std::size_t k = 0; k < 3; ++k) {
            long double dot = 0;
            for (std::size_t b = 0; b < m; ++b) dot += model.axis(b, k) * ref.eigen.vectors[k][b];
            const long double sign = dot < 0 ? -1.0L : 1.0L;
            for (std::size_t p = 0; p < n; ++p) {
                const double diff = std::abs(got.values[p * 3 + k] - double(sign * ref.projected[p * 3 + k]));
                worst = std::max(worst, diff);
            }
        }
    }
    return verdict(worst <= 1e-8, "50 views, max |diff| " + fmt("%.2e", worst));
}

// ---------------------------------------------------------------- 3

Verdict view_partition() {
    std::mt19937_64 rng(303);
    std::uniform_int_distribution<std::size_t> pick_b(1, 512);
    int bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t b = pick_b(rng);
        const std::size_t g = std::uniform_int_distribution<std::size_t>(1, b)(rng);
        const ViewSpec s = make_view_spec(b, g);
        const std::size_t groups = (b + g - 1) / g;
        bool ok = s.groups == groups && s.padded_bands == groups * g && s.band_indices.size() == g;
        std::vector<int> seen(groups * g, 0);
        for (std::size_t v = 0; ok && v < s.band_indices.size(); ++v) {
            ok = s.band_indices[v].size() == groups;
            for (std::size_t m = 0; ok && m < groups; ++m) {
                const std::size_t idx = s.band_indices[v][m];
                ok = idx == m * g + v && idx < seen.size();
                if (ok) ++seen[idx];
            }
        }
        for (int c : seen) ok = ok && c == 1;
        bad += !ok;
    }
    return verdict(bad == 0, "1000 (B, g) pairs, " + std::to_string(bad) + " violations");
}

// ---------------------------------------------------------------- 4

Verdict tokenizer_equivariance() {
    std::mt19937_64 rng(404);
    const std::size_t sizes[4] = {3, 5, 7, 9};
    std::uniform_int_distribution<std::size_t> chans(1, 64);
    int bad = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t p = sizes[rng() % 4];
        const auto f = oracle::random_tensor<float>({p, p, chans(rng)}, rng, -10, 10);
        GradGraph<float> g(false);
        const auto a = tokenize(g, make_tensor(f));
        const auto r = tokenize(g, make_tensor(rotate180(f)));
        for (int i = 0; i < 4; ++i) bad += !(*r[i] == *a[3 - i]);
    }
    return verdict(bad == 0, "500 cuboids, " + std::to_string(bad) + " token mismatches");
}

// ---------------------------------------------------------------- 5

// Shapes of every stage plus the logits, serialized for the rerun check.
nlohmann::ordered_json shape_trace() {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (std::size_t p : {3u, 5u, 7u}) {
        ModelConfig c;
        c.patch_size = p;
        c.num_classes = 3;
        const auto params = init_params<float>(c, 5);
        std::mt19937_64 rng(500 + p);
        auto patch = make_tensor(oracle::random_tensor<float>({p, p, 30}, rng, 0, 1));
        GradGraph<float> g(false);
        ForwardTrace<float> t;
        const auto logits = forward(g, c, params, patch, &t);
        nlohmann::ordered_json j;
        j["P"] = p;
        j["patch"] = patch->shape();
        j["sed_expanded"] = t.sed_expanded->shape();
        j["sed_encoded"] = t.sed_encoded->shape();
        j["features"] = t.features->shape();
        j["tokens"] = t.tokens->shape();
        j["logits"] = logits->shape();
        j["logit_values"] = std::vector<float>(logits->values().begin(), logits->values().end());
        out.push_back(j);
    }
    return out;
}

Verdict shape_conformance(const nlohmann::ordered_json& trace) {
    bool ok = true;
    for (const auto& j : trace) {
        const std::size_t p = j["P"];
        ok = ok && j["patch"] == Shape{p, p, 30} && j["sed_expanded"] == Shape{p, p, 240} &&
             j["sed_encoded"] == Shape{p, p, 40} && j["features"] == Shape{p, p, 64} &&
             j["tokens"] == Shape{5, 64} && j["logits"] == Shape{1, 3};
    }
    return verdict(ok, "P in {3,5,7}: PxPx30 -> 240 -> 40 -> 64 -> 5x64 -> 1x3");
}

// ---------------------------------------------------------------- 6, 7, 9, 10

struct SceneRun {
    ExperimentResult experiment;
    RotationAudit audit;
    double seconds = 0;

    std::string metrics_json() const {
        nlohmann::ordered_json j;
        j["test"] = to_json(experiment.test);
        j["audit"] = to_json(audit);
        j["best_epoch"] = experiment.training.best_epoch;
        return j.dump();
    }
};

SceneRun run_scene(std::uint64_t seed, double noise, std::size_t epochs, bool use_sed) {
    const auto start = std::chrono::steady_clock::now();
    SynthOptions so;
    so.seed = seed;
    so.noise_sigma = noise;
    const SynthScene scene = synth_scene(so);
    ModelConfig mc;
    mc.num_classes = scene.labels.classes;
    mc.use_sed = use_sed;
    TrainConfig tc;
    tc.epochs = epochs;
    tc.seed = seed;
    SceneRun run;
    run.experiment = run_experiment(scene.cube, scene.labels, mc, tc);
    // The audit needs the representation the model was trained on.
    const MpcaResult reduced = preprocess(scene.cube, mc);
    const auto test = run.experiment.training.split.indices(Split::test);
    run.audit = rotation_audit(reduced.representation.raster, scene.labels, mc,
                               run.experiment.training.params, test);
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

std::string oa_text(const SceneRun& r) {
    return "OA " + fmt("%.4f", r.experiment.test.overall_accuracy) + " AA " +
           fmt("%.4f", r.experiment.test.average_accuracy) + " best epoch " +
           std::to_string(r.experiment.training.best_epoch) + ", " + fmt("%.0f s", r.seconds);
}

// ---------------------------------------------------------------- 8

Verdict paper_numbers(const std::string& cube_path, const std::string& labels_path) {
    if (cube_path.empty() || labels_path.empty()) {
        return {Outcome::skip, "needs --ip-cube and --ip-labels (converted Indian Pines)"};
    }
    const HsiCube cube = load_cube(cube_path);
    const LabelMap labels = load_labels(labels_path);
    validate_labels(labels);
    std::string detail;
    bool ok = true;
    for (const auto& [p, floor] : {std::pair<std::size_t, double>{5, 0.90}, {7, 0.93}}) {
        double sum = 0;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            ModelConfig mc;
            mc.patch_size = p;
            mc.num_classes = labels.classes;
            TrainConfig tc;
            tc.seed = seed;
            sum += run_experiment(cube, labels, mc, tc).test.overall_accuracy;
        }
        const double mean = sum / 3;
        ok = ok && mean >= floor;
        detail += "P=" + std::to_string(p) + " mean OA " + fmt("%.4f", mean) + " (>= " +
                  fmt("%.2f", floor) + ") ";
    }
    return verdict(ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    std::string ip_cube, ip_labels;
    app.add_option("--only", only, "Run only these criteria")->delimiter(',');
    app.add_option("--ip-cube", ip_cube);
    app.add_option("--ip-labels", ip_labels);
    CLI11_PARSE(app, argc, argv);
    const std::set<int> selected(only.begin(), only.end());
    auto wanted = [&](int n) { return selected.empty() || selected.count(n) > 0; };

    int failures = 0;
    auto report = [&](int n, const char* title, const std::function<Verdict()>& body) {
        if (!wanted(n)) return;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = body();
        } catch (const std::exception& e) {
            v = {Outcome::fail, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const char* tag = v.outcome == Outcome::pass ? "PASS" : v.outcome == Outcome::fail ? "FAIL" : "SKIP";
        failures += v.outcome == Outcome::fail;
        std::printf("%s  AC%-2d %-28s %s [%.1f s]\n", tag, n, title, v.detail.c_str(), secs);
        std::fflush(stdout);
    };

    report(1, "gradient fidelity", gradient_fidelity);
    report(2, "pca oracle equivalence", pca_oracle);
    report(3, "view partition", view_partition);
    report(4, "tokenizer equivariance", tokenizer_equivariance);

    nlohmann::ordered_json shapes;
    if (wanted(5) || wanted(10)) shapes = shape_trace();
    report(5, "shape conformance", [&] { return shape_conformance(shapes); });

    std::optional<SceneRun> clean, noisy;
    const bool need_scenes = wanted(6) || wanted(7) || wanted(9) || wanted(10);
    report(6, "synthetic scene learning", [&] {
        clean = run_scene(0, 0.0, 50, true);
        noisy = run_scene(0, 0.05, 300, true);
        const double a = clean->experiment.test.overall_accuracy;
        const double b = noisy->experiment.test.overall_accuracy;
        return verdict(a >= 0.99 && b >= 0.95,
                       "noiseless 50 ep: " + oa_text(*clean) + "; sigma 0.05 300 ep: " + oa_text(*noisy));
    });
    if (need_scenes && !noisy) {
        clean = run_scene(0, 0.0, 50, true);
        noisy = run_scene(0, 0.05, 300, true);
    }

    report(7, "rotation audit", [&] {
        const double d = noisy->audit.delta_oa;
        return verdict(std::abs(d) <= 0.02,
                       "OA 0deg " + fmt("%.4f", noisy->audit.original.overall_accuracy) + " 180deg " +
                           fmt("%.4f", noisy->audit.rotated.overall_accuracy) + " delta " +
                           fmt("%+.4f", d));
    });

    report(8, "paper-number reproduction", [&] { return paper_numbers(ip_cube, ip_labels); });

    report(9, "ablation direction (no SED)", [&] {
        int worse = 0;
        std::string detail;
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const double full = seed == 0 ? noisy->experiment.test.overall_accuracy
                                          : run_scene(seed, 0.05, 300, true).experiment.test.overall_accuracy;
            const double ablated = run_scene(seed, 0.05, 300, false).experiment.test.overall_accuracy;
            worse += ablated < full;
            if (!detail.empty()) detail += "; ";
            detail += "seed " + std::to_string(seed) + ": full " + fmt("%.4f", full) + " no-SED " +
                      fmt("%.4f", ablated);
        }
        return verdict(worse >= 2, std::to_string(worse) + "/3 seeds worse without SED (" + detail + ")");
    });

    report(10, "determinism", [&] {
        const bool same_shapes = shape_trace().dump() == shapes.dump();
        const SceneRun clean2 = run_scene(0, 0.0, 50, true);
        const SceneRun noisy2 = run_scene(0, 0.05, 300, true);
        const bool same_clean = clean2.metrics_json() == clean->metrics_json();
        const bool same_noisy = noisy2.metrics_json() == noisy->metrics_json();
        return verdict(same_shapes && same_clean && same_noisy,
                       std::string("shape trace ") + (same_shapes ? "identical" : "DIFFERS") +
                           ", noiseless run " + (same_clean ? "identical" : "DIFFERS") +
                           ", noisy run + audit " + (same_noisy ? "identical" : "DIFFERS"));
    });

    std::printf("%s\n", failures == 0 ? "acceptance: all evaluated criteria passed"
                                       : "acceptance: some criteria FAILED");
    return failures == 0 ? 0 : 1;
}
