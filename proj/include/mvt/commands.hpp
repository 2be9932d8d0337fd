#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mvt/run_config.hpp"
#include "mvt/synth.hpp"

namespace mvt {

// Each command writes its machine-readable result to `out` and progress to
// `log`, and reports failure by throwing mvt::Error.

// <out_dir>/cube.hsz and <out_dir>/labels.hsz.
void cmd_synth(const SynthOptions& options, const std::filesystem::path& out_dir,
               std::ostream& out);

// MMNorm then MPCA (or plain PCA); writes the representation cube and the
// PCA models under the output directory.
void cmd_preprocess(const RunConfig& config, std::ostream& out);

// Trains on the preprocessed representation; writes the checkpoint and one
// JSON line per epoch.
void cmd_train(const RunConfig& config, std::ostream& out, std::ostream& log);

// Metrics JSON on the test split derived from the configured seed.
void cmd_eval(const RunConfig& config, const std::filesystem::path& checkpoint, std::ostream& out);

// Paired original / 180-degree-rotated test metrics.
void cmd_audit(const RunConfig& config, const std::filesystem::path& checkpoint,
               std::ostream& out);

// Full preprocess + train + evaluate per value; CSV to `out` and to
// <output.dir>/sweep_<axis>.csv.
void cmd_sweep(const RunConfig& config, const std::string& axis, const std::vector<double>& values,
               std::ostream& out, std::ostream& log);

// P6 classification map of every labelled pixel.
void cmd_map(const RunConfig& config, const std::filesystem::path& checkpoint,
             const std::filesystem::path& image, std::ostream& out);

}  // namespace mvt
