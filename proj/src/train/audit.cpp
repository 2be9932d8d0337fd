#include "mvt/train.hpp"

namespace mvt {

RotationAudit rotation_audit(const Raster<float>& representation, const LabelMap& labels,
                             const ModelConfig& config, const ModelParams<float>& params,
                             std::span<const std::size_t> pixels) {
    RotationAudit audit;
    audit.original = evaluate(representation, labels, config, params, pixels, false);
    audit.rotated = evaluate(representation, labels, config, params, pixels, true);
    require(audit.original.class_totals == audit.rotated.class_totals, ErrorKind::dimension,
            "rotation audit evaluated different pixel sets");
    audit.delta_oa = audit.original.overall_accuracy - audit.rotated.overall_accuracy;
    audit.delta_aa = audit.original.average_accuracy - audit.rotated.average_accuracy;
    return audit;
}

nlohmann::ordered_json to_json(const RotationAudit& audit) {
    nlohmann::ordered_json j;
    j["original"] = to_json(audit.original);
    j["rotated"] = to_json(audit.rotated);
    j["delta_oa"] = audit.delta_oa;
    j["delta_aa"] = audit.delta_aa;
    return j;
}

}  // namespace mvt
