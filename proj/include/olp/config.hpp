#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "olp/generators.hpp"
#include "olp/policies.hpp"

namespace olp::cli {

// Malformed or inconsistent experiment configuration. `where` names the
// offending field path or the parse position.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct AnalysisToggles {
  bool regret = true;
  bool dual_convergence = false;
  bool state_deviation = false;
  bool fit = false;
};

struct PopulationSettings {
  std::size_t K = 200;
  std::size_t K_delta = 500;
  std::size_t bootstrap = 20;
};

struct DeviationSettings {
  double eps_d = 0.1;
  std::size_t policy = 0;  // index into policies
  std::size_t stride = 1;  // emit every stride-th j to state_deviation.csv
};

struct ExperimentConfig {
  gen::GeneratorSpec generator;
  std::vector<policy::PolicySpec> policies;
  std::vector<std::size_t> n_grid;
  std::size_t reps = 2;
  std::size_t dual_convergence_reps = 0;  // 0 = reps
  Vec d0;
  std::uint64_t seed = 0;
  std::string outputs;
  AnalysisToggles analysis;
  PopulationSettings population;
  DeviationSettings deviation;
};

// Parses the JSON config text. Unknown keys are errors, as are keys that the
// selected generator family does not use.
ExperimentConfig parse_config(const std::string& text);

// Reads a config file, or the config echoed inside a run_manifest.json.
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical JSON with every default made explicit.
std::string config_to_json(const ExperimentConfig& config, int indent = 2);

}  // namespace olp::cli
