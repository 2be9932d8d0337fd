#include "mvt/error.hpp"
#include "mvt/hsz.hpp"
#include "mvt/mpca.hpp"

namespace mvt {

void save_pca(const PcaBundle& bundle, const std::filesystem::path& path) {
    nlohmann::ordered_json header;
    header["g"] = bundle.num_views;
    header["M"] = bundle.groups;
    header["d"] = bundle.components;
    header["bands"] = bundle.source_bands;
    header["dtype"] = "f64le";
    std::vector<std::byte> payload;
    for (const auto& model : bundle.models) {
        require(model.bands == bundle.groups && model.components == bundle.components,
                ErrorKind::dimension, "PCA model shape disagrees with bundle header");
        for (double v : model.mean) hsz::append_le(payload, v);
        for (double v : model.projection) hsz::append_le(payload, v);
        for (double v : model.eigenvalues) hsz::append_le(payload, v);
    }
    hsz::write_frame(path, hsz::pca_magic, header, payload);
}

PcaBundle load_pca(const std::filesystem::path& path) {
    auto frame = hsz::read_frame(path, hsz::pca_magic);
    PcaBundle bundle;
    bundle.num_views = hsz::header_size(frame.header, "g");
    bundle.groups = hsz::header_size(frame.header, "M");
    bundle.components = hsz::header_size(frame.header, "d");
    bundle.source_bands = hsz::header_size(frame.header, "bands");
    const std::size_t m = bundle.groups, d = bundle.components;
    const std::size_t expected = bundle.num_views * (m + m * d + d) * sizeof(double);
    require(frame.payload.size() == expected, ErrorKind::length,
            path.string() + ": payload has " + std::to_string(frame.payload.size()) +
                " bytes, header implies " + std::to_string(expected));
    hsz::PayloadReader reader(frame.payload);
    for (std::size_t n = 0; n < bundle.num_views; ++n) {
        PcaModel model;
        model.bands = m;
        model.components = d;
        model.mean.resize(m);
        model.projection.resize(m * d);
        model.eigenvalues.resize(d);
        for (double& v : model.mean) v = reader.next<double>();
        for (double& v : model.projection) v = reader.next<double>();
        for (double& v : model.eigenvalues) v = reader.next<double>();
        bundle.models.push_back(std::move(model));
    }
    return bundle;
}

}  // namespace mvt
