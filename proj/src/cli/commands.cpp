#include <fstream>
#include <ostream>
#include <sstream>

#include "mvt/color_map.hpp"
#include "mvt/commands.hpp"

namespace mvt {

namespace {

namespace fs = std::filesystem;

void require_file(const fs::path& path, const char* hint) {
    require(fs::exists(path), ErrorKind::io, path.string() + ": no such file (" + hint + ")");
}

// Representation plus labels for the model-facing commands.
struct Prepared {
    HsiCube representation;
    LabelMap labels;
};

Prepared load_prepared(const RunConfig& config) {
    require_file(config.representation_path(), "run preprocess first");
    require_file(config.data.labels_path, "labels path from the config");
    Prepared p{load_cube(config.representation_path()), load_labels(config.data.labels_path)};
    validate_labels(p.labels);
    return p;
}

Checkpoint load_matching_checkpoint(const RunConfig& config, const fs::path& path,
                                    std::size_t num_classes) {
    require_file(path, "run train first or pass --checkpoint");
    Checkpoint ckpt = load_checkpoint(path);
    check_compatible(config.model_config(num_classes), ckpt.config);
    return ckpt;
}

fs::path checkpoint_or_default(const RunConfig& config, const fs::path& checkpoint) {
    return checkpoint.empty() ? config.checkpoint_path() : checkpoint;
}

std::vector<std::size_t> test_pixels(const RunConfig& config, const LabelMap& labels) {
    const TrainConfig t = config.train_config();
    return stratified_split(labels, t.fractions, t.seed).indices(Split::test);
}

}  // namespace

void cmd_synth(const SynthOptions& options, const fs::path& out_dir, std::ostream& out) {
    const SynthScene scene = synth_scene(options);
    fs::create_directories(out_dir);
    save_cube(scene.cube, out_dir / "cube.hsz");
    save_labels(scene.labels, out_dir / "labels.hsz");
    out << (out_dir / "cube.hsz").string() << '\n' << (out_dir / "labels.hsz").string() << '\n';
}

void cmd_preprocess(const RunConfig& config, std::ostream& out) {
    require_file(config.data.cube_path, "cube path from the config");
    const HsiCube raw = load_cube(config.data.cube_path);
    const MpcaResult result = preprocess(raw, config.model_config(0));
    fs::create_directories(config.out_dir());
    save_raster(result.representation.raster, config.representation_path());
    save_pca(bundle_of(result), config.pca_path());
    const auto& r = result.representation.raster;
    out << config.representation_path().string() << ' ' << r.height << 'x' << r.width << 'x'
        << r.channels << '\n'
        << config.pca_path().string() << '\n';
}

void cmd_train(const RunConfig& config, std::ostream& out, std::ostream& log) {
    const Prepared data = load_prepared(config);
    const ModelConfig model = config.model_config(data.labels.classes);
    fs::create_directories(config.out_dir());
    std::ofstream history(config.history_path());
    require(static_cast<bool>(history), ErrorKind::io,
            "cannot open " + config.history_path().string() + " for writing");

    const TrainResult result =
        train(data.representation.raster, data.labels, model, config.train_config(),
              [&](const EpochRecord& record) {
                  history << to_json(record).dump() << '\n';
                  log << "epoch " << record.epoch << " loss " << record.train_loss << " val_oa "
                      << record.val_oa << '\n';
              });
    for (const auto& w : result.split.warnings) log << "warning: " << w << '\n';
    save_checkpoint(model, result.params, config.checkpoint_path());

    nlohmann::ordered_json summary;
    summary["checkpoint"] = config.checkpoint_path().string();
    summary["history"] = config.history_path().string();
    summary["best_epoch"] = result.best_epoch;
    summary["best_val_oa"] = result.best_val_oa;
    out << summary.dump() << '\n';
}

void cmd_eval(const RunConfig& config, const fs::path& checkpoint, std::ostream& out) {
    const Prepared data = load_prepared(config);
    const Checkpoint ckpt =
        load_matching_checkpoint(config, checkpoint_or_default(config, checkpoint), data.labels.classes);
    const auto pixels = test_pixels(config, data.labels);
    const MetricsReport report =
        evaluate(data.representation.raster, data.labels, ckpt.config, ckpt.params, pixels);
    out << to_json(report).dump(2) << '\n';
}

void cmd_audit(const RunConfig& config, const fs::path& checkpoint, std::ostream& out) {
    const Prepared data = load_prepared(config);
    const Checkpoint ckpt =
        load_matching_checkpoint(config, checkpoint_or_default(config, checkpoint), data.labels.classes);
    const auto pixels = test_pixels(config, data.labels);
    const RotationAudit audit =
        rotation_audit(data.representation.raster, data.labels, ckpt.config, ckpt.params, pixels);
    out << to_json(audit).dump(2) << '\n';
}

void cmd_sweep(const RunConfig& config, const std::string& axis_name,
               const std::vector<double>& values, std::ostream& out, std::ostream& log) {
    const SweepAxis axis = parse_sweep_axis(axis_name);
    require(!values.empty(), ErrorKind::usage, "sweep needs at least one value");
    require_file(config.data.cube_path, "cube path from the config");
    require_file(config.data.labels_path, "labels path from the config");
    const HsiCube raw = load_cube(config.data.cube_path);
    const LabelMap labels = load_labels(config.data.labels_path);
    validate_labels(labels);

    log << "sweeping " << axis_name << " over " << values.size() << " values\n";
    const auto rows =
        sweep(raw, labels, config.model_config(labels.classes), config.train_config(), axis, values);
    std::ostringstream csv;
    write_sweep_csv(rows, csv);

    fs::create_directories(config.out_dir());
    const fs::path path = config.out_dir() / ("sweep_" + axis_name + ".csv");
    std::ofstream file(path);
    require(static_cast<bool>(file), ErrorKind::io, "cannot open " + path.string() + " for writing");
    file << csv.str();
    out << csv.str();
}

void cmd_map(const RunConfig& config, const fs::path& checkpoint, const fs::path& image,
             std::ostream& out) {
    const Prepared data = load_prepared(config);
    const Checkpoint ckpt =
        load_matching_checkpoint(config, checkpoint_or_default(config, checkpoint), data.labels.classes);
    std::vector<std::size_t> labelled;
    for (std::size_t i = 0; i < data.labels.ids.size(); ++i) {
        if (data.labels.ids[i] != 0) labelled.push_back(i);
    }
    const auto predicted =
        predict_pixels(data.representation.raster, ckpt.config, ckpt.params, labelled);
    std::vector<std::int32_t> full(data.labels.ids.size(), 0);
    for (std::size_t i = 0; i < labelled.size(); ++i) full[labelled[i]] = predicted[i];

    const fs::path target = image.empty() ? config.out_dir() / "map.ppm" : image;
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    write_ppm(target, data.labels.height, data.labels.width, render_class_map(data.labels, full));
    out << target.string() << '\n';
}

}  // namespace mvt
