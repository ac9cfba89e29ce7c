#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "scanorder/chain.hpp"
#include "scanorder/mixing.hpp"

namespace scanorder {

inline constexpr const char* kOutputDirEnv = "SCANORDER_OUT_DIR";

// Fully resolved description of one CLI invocation. The manifest written
// next to the outputs is to_json(config); feeding it back reproduces them.
struct ExperimentConfig {
  // spectral, mixing, lumped, coupling, verify (in execution order).
  std::vector<std::string> analyses;
  // Model document (see model_io.hpp); null when no model was given.
  nlohmann::json model;
  std::vector<std::string> samplers{"random_update", "alternating_scan"};
  bool lazy = true;
  double threshold = kDefaultThreshold;
  std::uint64_t t_max = kDefaultMaxSteps;
  // iterate | doubling
  std::string mixing_method = "iterate";
  std::uint64_t max_updates = 100'000'000;
  std::size_t replicates = 50;
  // Laziness of the coupled random-update dynamics (independent of `lazy`).
  bool coupling_lazy = false;
  std::optional<std::uint64_t> seed;
  std::size_t cap = kDefaultStateCap;
  // lumped: sweep n .. lumped_n_max (0 = the model's n only).
  std::size_t lumped_n_max = 0;
  // verify: relaxation | mixing | fill
  std::string suite = "relaxation";
  std::size_t trials = 200;
  std::string out_dir;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& doc);

// Checks the invariants of a config (non-empty analyses, seed where needed,
// known names). Throws Error.
void validate(const ExperimentConfig& config);

struct RunOutcome {
  std::vector<std::filesystem::path> files;
};

// Executes every analysis and writes the CSVs plus manifest.json into
// config.out_dir (created if needed). Each file is written to a temporary
// name and renamed; on failure every file from this run is removed and the
// exception propagates.
RunOutcome run_experiment(const ExperimentConfig& config);

}  // namespace scanorder
