#include <string>

#include "mvt/error.hpp"
#include "mvt/model.hpp"

namespace mvt {

void ModelConfig::validate() const {
    require(patch_size % 2 == 1, ErrorKind::config,
            "patch size must be odd, got " + std::to_string(patch_size));
    require(conv3d_extent % 2 == 1 && conv2d_extent % 2 == 1, ErrorKind::config,
            "kernel extents must be odd");
    require(in_channels() > 0, ErrorKind::config, "input channel count must be positive");
    require(num_classes >= 1, ErrorKind::config, "model needs at least one class");
    require(heads >= 1 && feature_channels % heads == 0, ErrorKind::config,
            "feature channels " + std::to_string(feature_channels) +
                " must be divisible by the head count " + std::to_string(heads));
    require(head_dim() * heads == feature_channels, ErrorKind::config,
            "heads x head dim must equal feature channels");
    require(feature_dim >= 1 && feature_channels >= 1, ErrorKind::config,
            "feature widths must be positive");
    if (use_sed) {
        require(conv3d_kernels >= 1 && mid_channels >= 1, ErrorKind::config,
                "SED kernel counts must be positive");
        require(conv3d_kernels * in_channels() > mid_channels && feature_channels > mid_channels,
                ErrorKind::config,
                "SED must be U-shaped: K1*C=" + std::to_string(conv3d_kernels * in_channels()) +
                    " and K3=" + std::to_string(feature_channels) + " must both exceed K2=" +
                    std::to_string(mid_channels));
    }
}

nlohmann::ordered_json to_json(const ModelConfig& c) {
    nlohmann::ordered_json j;
    j["patch_size"] = c.patch_size;
    j["num_views"] = c.num_views;
    j["view_components"] = c.view_components;
    j["conv3d_kernels"] = c.conv3d_kernels;
    j["conv3d_extent"] = c.conv3d_extent;
    j["mid_channels"] = c.mid_channels;
    j["feature_channels"] = c.feature_channels;
    j["conv2d_extent"] = c.conv2d_extent;
    j["heads"] = c.heads;
    j["feature_dim"] = c.feature_dim;
    j["num_classes"] = c.num_classes;
    j["use_mpca"] = c.use_mpca;
    j["use_sed"] = c.use_sed;
    j["use_global_token"] = c.use_global_token;
    return j;
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
    ModelConfig c;
    try {
        c.patch_size = j.at("patch_size").get<std::size_t>();
        c.num_views = j.at("num_views").get<std::size_t>();
        c.view_components = j.at("view_components").get<std::size_t>();
        c.conv3d_kernels = j.at("conv3d_kernels").get<std::size_t>();
        c.conv3d_extent = j.at("conv3d_extent").get<std::size_t>();
        c.mid_channels = j.at("mid_channels").get<std::size_t>();
        c.feature_channels = j.at("feature_channels").get<std::size_t>();
        c.conv2d_extent = j.at("conv2d_extent").get<std::size_t>();
        c.heads = j.at("heads").get<std::size_t>();
        c.feature_dim = j.at("feature_dim").get<std::size_t>();
        c.num_classes = j.at("num_classes").get<std::size_t>();
        c.use_mpca = j.at("use_mpca").get<bool>();
        c.use_sed = j.at("use_sed").get<bool>();
        c.use_global_token = j.at("use_global_token").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, std::string("model config: ") + e.what());
    }
    return c;
}

void check_compatible(const ModelConfig& expected, const ModelConfig& actual) {
    const auto a = to_json(expected);
    const auto b = to_json(actual);
    for (const auto& [key, value] : a.items()) {
        require(b.at(key) == value, ErrorKind::compatibility,
                "checkpoint " + key + "=" + b.at(key).dump() + " but config expects " + value.dump());
    }
}

}  // namespace mvt
