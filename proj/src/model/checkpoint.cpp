#include "mvt/hsz.hpp"
#include "mvt/model.hpp"

namespace mvt {

void save_checkpoint(const ModelConfig& config, const ModelParams<float>& params,
                     const std::filesystem::path& path) {
    nlohmann::ordered_json header;
    header["config"] = to_json(config);
    header["dtype"] = "f32le";
    auto listing = nlohmann::ordered_json::array();
    std::vector<std::byte> payload;
    payload.reserve(params.parameter_count() * sizeof(float));
    for (const auto& [name, tensor] : params.named()) {
        nlohmann::ordered_json entry;
        entry["name"] = name;
        entry["shape"] = tensor->shape();
        listing.push_back(std::move(entry));
        for (float v : tensor->values()) hsz::append_le(payload, v);
    }
    header["params"] = std::move(listing);
    hsz::write_frame(path, hsz::model_magic, header, payload);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    auto frame = hsz::read_frame(path, hsz::model_magic);
    require(frame.header.contains("config") && frame.header.contains("params"), ErrorKind::parse,
            path.string() + ": checkpoint header lacks config or params");
    Checkpoint ckpt;
    ckpt.config = model_config_from_json(frame.header["config"]);
    ckpt.config.validate();
    // Initialization fixes which tensors exist and their shapes; values are
    // overwritten from the payload.
    ckpt.params = init_params<float>(ckpt.config, 0);
    const auto named = ckpt.params.named();
    const auto& listing = frame.header["params"];
    require(listing.is_array() && listing.size() == named.size(), ErrorKind::compatibility,
            path.string() + ": parameter listing does not match the configured architecture");

    hsz::PayloadReader reader(frame.payload);
    for (std::size_t i = 0; i < named.size(); ++i) {
        const auto& [name, tensor] = named[i];
        require(listing[i].value("name", "") == name, ErrorKind::compatibility,
                path.string() + ": expected parameter " + name);
        require(listing[i].at("shape").get<Shape>() == tensor->shape(), ErrorKind::compatibility,
                path.string() + ": shape mismatch for " + name);
        for (auto& v : tensor->values()) v = reader.next<float>();
    }
    require(reader.remaining() == 0, ErrorKind::length,
            path.string() + ": " + std::to_string(reader.remaining()) + " trailing payload bytes");
    return ckpt;
}

}  // namespace mvt
