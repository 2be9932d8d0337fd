#include <fstream>
#include <initializer_list>
#include <string_view>

#include "mvt/run_config.hpp"

namespace mvt {

namespace {

using Json = nlohmann::json;

const Json& section(const Json& root, const char* name) {
    static const Json empty = Json::object();
    if (!root.contains(name)) return empty;
    const Json& s = root.at(name);
    require(s.is_object(), ErrorKind::config, std::string("section '") + name + "' must be an object");
    return s;
}

void reject_unknown(const Json& object, std::string_view where,
                    std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : object.items()) {
        bool ok = false;
        for (auto k : known) ok = ok || key == k;
        require(ok, ErrorKind::config,
                "unknown key '" + key + "' in " + std::string(where));
    }
}

template <typename T>
void read(const Json& s, const char* section_name, const char* key, T& target) {
    if (!s.contains(key)) return;
    const Json& v = s.at(key);
    const std::string where = std::string(section_name) + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
        require(v.is_boolean(), ErrorKind::config, where + " must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
        require(v.is_number_unsigned(), ErrorKind::config, where + " must be a non-negative integer");
    } else if constexpr (std::is_floating_point_v<T>) {
        require(v.is_number(), ErrorKind::config, where + " must be a number");
    } else {
        require(v.is_string(), ErrorKind::config, where + " must be a string");
    }
    target = v.get<T>();
}

}  // namespace

RunConfig run_config_from_json(const Json& root) {
    require(root.is_object(), ErrorKind::config, "run config must be a JSON object");
    reject_unknown(root, "run config", {"data", "mpca", "model", "train", "output"});
    RunConfig c;

    const Json& data = section(root, "data");
    reject_unknown(data, "data", {"cube_path", "labels_path"});
    read(data, "data", "cube_path", c.data.cube_path);
    read(data, "data", "labels_path", c.data.labels_path);

    const Json& mpca = section(root, "mpca");
    reject_unknown(mpca, "mpca", {"g", "d", "enabled"});
    read(mpca, "mpca", "g", c.mpca.g);
    read(mpca, "mpca", "d", c.mpca.d);
    read(mpca, "mpca", "enabled", c.mpca.enabled);

    const Json& model = section(root, "model");
    reject_unknown(model, "model", {"P", "K3", "heads", "j", "use_sed", "use_global_token"});
    read(model, "model", "P", c.model.P);
    read(model, "model", "K3", c.model.K3);
    read(model, "model", "heads", c.model.heads);
    read(model, "model", "j", c.model.j);
    read(model, "model", "use_sed", c.model.use_sed);
    read(model, "model", "use_global_token", c.model.use_global_token);

    const Json& train = section(root, "train");
    reject_unknown(train, "train",
                   {"epochs", "batch", "lr", "seed", "train_fraction", "val_fraction"});
    read(train, "train", "epochs", c.train.epochs);
    read(train, "train", "batch", c.train.batch);
    read(train, "train", "lr", c.train.lr);
    read(train, "train", "seed", c.train.seed);
    read(train, "train", "train_fraction", c.train.train_fraction);
    read(train, "train", "val_fraction", c.train.val_fraction);

    const Json& output = section(root, "output");
    reject_unknown(output, "output", {"dir"});
    read(output, "output", "dir", c.output.dir);

    require(c.train.epochs >= 1 && c.train.batch >= 1, ErrorKind::config,
            "train.epochs and train.batch must be positive");
    require(c.train.lr >= 0, ErrorKind::config, "train.lr must be non-negative");
    require(c.train.train_fraction > 0 && c.train.val_fraction >= 0 &&
                c.train.train_fraction + c.train.val_fraction <= 1.0,
            ErrorKind::config, "train fractions must be positive and sum to at most 1");
    return c;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["data"] = {{"cube_path", c.data.cube_path}, {"labels_path", c.data.labels_path}};
    j["mpca"] = {{"g", c.mpca.g}, {"d", c.mpca.d}, {"enabled", c.mpca.enabled}};
    j["model"] = {{"P", c.model.P},
                  {"K3", c.model.K3},
                  {"heads", c.model.heads},
                  {"j", c.model.j},
                  {"use_sed", c.model.use_sed},
                  {"use_global_token", c.model.use_global_token}};
    j["train"] = {{"epochs", c.train.epochs},
                  {"batch", c.train.batch},
                  {"lr", c.train.lr},
                  {"seed", c.train.seed},
                  {"train_fraction", c.train.train_fraction},
                  {"val_fraction", c.train.val_fraction}};
    j["output"] = {{"dir", c.output.dir}};
    return j;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    if (path.empty()) return RunConfig{};
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open config " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception& e) {
        fail(ErrorKind::parse, path.string() + ": " + e.what());
    }
    return run_config_from_json(j);
}

ModelConfig RunConfig::model_config(std::size_t num_classes) const {
    ModelConfig m;
    m.patch_size = model.P;
    m.num_views = mpca.g;
    m.view_components = mpca.d;
    m.feature_channels = model.K3;
    m.heads = model.heads;
    m.feature_dim = model.j;
    m.num_classes = num_classes;
    m.use_mpca = mpca.enabled;
    m.use_sed = model.use_sed;
    m.use_global_token = model.use_global_token;
    return m;
}

TrainConfig RunConfig::train_config() const {
    TrainConfig t;
    t.epochs = train.epochs;
    t.batch_size = train.batch;
    t.adam.learning_rate = train.lr;
    t.seed = train.seed;
    t.fractions.train = train.train_fraction;
    t.fractions.val = train.val_fraction;
    t.fractions.test = 1.0 - train.train_fraction - train.val_fraction;
    return t;
}

}  // namespace mvt
