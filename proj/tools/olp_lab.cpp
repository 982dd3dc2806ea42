// olp-lab: run experiments, validate generators, fit regret curves.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "olp/experiment.hpp"
#include "olp/parallel.hpp"
#include "olp/simplex.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSolverError = 3;
constexpr int kIoError = 4;

int report(const std::string& kind, const std::string& what, int code) {
  std::cerr << "olp-lab: " << kind << ": " << what << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online linear programming experiment lab"};
  app.set_version_flag("--version", std::string(OLP_VERSION));
  app.require_subcommand(1);

  std::size_t threads = 0;
  app.add_option("--threads", threads,
                 "Worker threads (default: OLP_LAB_THREADS or logical cores)");

  std::string run_config;
  std::optional<std::string> run_out;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config");
  run->add_option("config", run_config, "Config file or run_manifest.json")->required();
  run->add_option("--out", run_out, "Override the output directory");

  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Check generator and solver contracts");
  validate->add_option("config", validate_config, "Config file")->required();

  std::string fit_csv;
  std::string fit_model = "power";
  std::optional<std::string> fit_policy;
  auto* fit = app.add_subcommand("fit", "Fit a scaling law to a regret.csv");
  fit->add_option("csv", fit_csv, "Path to regret.csv")->required();
  fit->add_option("--model", fit_model, "Scaling model")
      ->check(CLI::IsMember({"power", "polylog"}));
  fit->add_option("--policy", fit_policy, "Policy name when the file holds several");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  if (threads == 0) threads = olp::default_threads();

  try {
    if (*run) {
      const auto config = olp::cli::load_config(run_config);
      std::optional<std::filesystem::path> out;
      if (run_out) out = *run_out;
      const auto summary = olp::cli::run_experiment(config, out, threads);
      for (const auto& f : summary.files)
        std::cout << (summary.outputs / f).string() << "\n";
    } else if (*validate) {
      const auto config = olp::cli::load_config(validate_config);
      std::cout << olp::cli::validate_experiment(config).json;
    } else if (*fit) {
      const auto model = fit_model == "power" ? olp::analysis::FitModel::kPowerLaw
                                              : olp::analysis::FitModel::kPolylog;
      std::cout << olp::cli::fit_to_json(olp::cli::fit_regret_csv(fit_csv, model, fit_policy));
    }
  } catch (const olp::cli::ConfigError& e) {
    return report("config error", e.what(), kConfigError);
  } catch (const olp::analysis::ReplicationError& e) {
    std::string where = "n=" + std::to_string(e.n()) +
                        " replication=" + std::to_string(e.replication());
    if (e.step()) where += " step=" + std::to_string(*e.step());
    return report("solver failure", where + ": " + e.what(), kSolverError);
  } catch (const olp::lp::SolverError& e) {
    return report("solver failure", e.what(), kSolverError);
  } catch (const std::ios_base::failure& e) {
    return report("i/o error", e.what(), kIoError);
  } catch (const std::filesystem::filesystem_error& e) {
    return report("i/o error", e.what(), kIoError);
  } catch (const std::invalid_argument& e) {
    return report("config error", e.what(), kConfigError);
  } catch (const std::exception& e) {
    return report("error", e.what(), kIoError);
  }
  return kOk;
}
