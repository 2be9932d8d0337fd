#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "mvt/model.hpp"
#include "mvt/train.hpp"

namespace mvt {

// JSON run document. Every key has a default, so an empty object (or no
// file at all) is a complete configuration. Unknown sections or keys are
// rejected with a config error.
struct RunConfig {
    struct Data {
        std::string cube_path = "data/cube.hsz";
        std::string labels_path = "data/labels.hsz";
    } data;
    struct Mpca {
        std::size_t g = 10;
        std::size_t d = 3;
        bool enabled = true;
    } mpca;
    struct Model {
        std::size_t P = 5;
        std::size_t K3 = 64;
        std::size_t heads = 8;
        std::size_t j = 64;
        bool use_sed = true;
        bool use_global_token = true;
    } model;
    struct Train {
        std::size_t epochs = 300;
        std::size_t batch = 64;
        double lr = 1e-4;
        std::uint64_t seed = 0;
        double train_fraction = 0.05;
        double val_fraction = 0.05;
    } train;
    struct Output {
        std::string dir = "out";
    } output;

    ModelConfig model_config(std::size_t num_classes) const;
    TrainConfig train_config() const;

    std::filesystem::path out_dir() const { return output.dir; }
    std::filesystem::path representation_path() const { return out_dir() / "representation.hsz"; }
    std::filesystem::path pca_path() const { return out_dir() / "pca.hsz"; }
    std::filesystem::path checkpoint_path() const { return out_dir() / "model.hsz"; }
    std::filesystem::path history_path() const { return out_dir() / "history.jsonl"; }
};

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const RunConfig& config);

// Empty path -> defaults. Throws io error for a missing file, parse error for
// malformed JSON.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace mvt
