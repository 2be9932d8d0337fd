// mvt: synth | preprocess | train | eval | audit | sweep | map

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvt/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Multiview hyperspectral classifier pipeline"};
    app.require_subcommand(1);

    mvt::SynthOptions synth;
    std::string synth_out = "data";
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic Voronoi scene");
    synth_cmd->add_option("--seed", synth.seed, "Master seed")->capture_default_str();
    synth_cmd->add_option("--height", synth.height)->capture_default_str();
    synth_cmd->add_option("--width", synth.width)->capture_default_str();
    synth_cmd->add_option("--bands", synth.bands)->capture_default_str();
    synth_cmd->add_option("--classes", synth.classes)->capture_default_str();
    synth_cmd->add_option("--noise", synth.noise_sigma, "Gaussian noise sigma")->capture_default_str();
    synth_cmd->add_option("--out", synth_out, "Output directory")->capture_default_str();

    std::string config_path;
    std::string checkpoint;
    std::string axis;
    std::vector<double> values;
    std::string image;

    auto with_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Run config JSON (defaults if omitted)");
        return cmd;
    };
    auto* pre_cmd = with_config(app.add_subcommand("preprocess", "MMNorm + MPCA"));
    auto* train_cmd = with_config(app.add_subcommand("train", "Train and write a checkpoint"));
    auto* eval_cmd = with_config(app.add_subcommand("eval", "Test-split metrics JSON"));
    auto* audit_cmd = with_config(app.add_subcommand("audit", "180-degree rotation audit"));
    auto* sweep_cmd = with_config(app.add_subcommand("sweep", "One-axis parameter sweep"));
    auto* map_cmd = with_config(app.add_subcommand("map", "Render a PPM classification map"));
    for (auto* cmd : {eval_cmd, audit_cmd, map_cmd}) {
        cmd->add_option("--checkpoint", checkpoint, "Checkpoint (default <output.dir>/model.hsz)");
    }
    sweep_cmd->add_option("--axis", axis, "patch_size, views, components, heads, train_fraction")
        ->required();
    sweep_cmd->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
    map_cmd->add_option("--out", image, "Image path (default <output.dir>/map.ppm)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: usage: " << e.what() << '\n';
        return 2;
    }

    try {
        if (synth_cmd->parsed()) {
            mvt::cmd_synth(synth, synth_out, std::cout);
            return 0;
        }
        const mvt::RunConfig config = mvt::load_run_config(config_path);
        if (pre_cmd->parsed()) mvt::cmd_preprocess(config, std::cout);
        else if (train_cmd->parsed()) mvt::cmd_train(config, std::cout, std::cerr);
        else if (eval_cmd->parsed()) mvt::cmd_eval(config, checkpoint, std::cout);
        else if (audit_cmd->parsed()) mvt::cmd_audit(config, checkpoint, std::cout);
        else if (sweep_cmd->parsed()) mvt::cmd_sweep(config, axis, values, std::cout, std::cerr);
        else if (map_cmd->parsed()) mvt::cmd_map(config, checkpoint, image, std::cout);
    } catch (const mvt::Error& e) {
        std::cerr << "error: " << mvt::to_string(e.kind()) << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
