#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "olp/analysis.hpp"
#include "olp/config.hpp"

namespace olp::cli {

struct RunSummary {
  std::filesystem::path outputs;
  std::vector<std::string> files;  // in write order, run_manifest.json last
};

// Runs every enabled analysis and writes the artifacts into the config's
// output directory (or `outputs_override`). Output bytes do not depend on
// `threads`.
RunSummary run_experiment(const ExperimentConfig& config,
                          const std::optional<std::filesystem::path>& outputs_override = {},
                          std::size_t threads = 0);

struct ValidationReport {
  bool passed = false;
  std::string json;
};

// Generator contract checks, non-degeneracy estimate and the m = 1
// breakpoint/simplex agreement on `solver_trials` random duals.
ValidationReport validate_experiment(const ExperimentConfig& config,
                                     std::size_t solver_trials = 50);

// Fits mean regret per (n, policy) read from a regret.csv. With several
// policies in the file, `policy` selects one; otherwise it is required.
analysis::FitResult fit_regret_csv(const std::filesystem::path& csv_path,
                                   analysis::FitModel model,
                                   const std::optional<std::string>& policy = {});

std::string fit_to_json(const analysis::FitResult& fit, int indent = 2);

}  // namespace olp::cli
