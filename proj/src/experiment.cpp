#include "olp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "olp/csv.hpp"
#include "olp/lp.hpp"
#include "olp/rng.hpp"

namespace olp::cli {
namespace {

using OrderedJson = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kManifestVersion = 1;

OrderedJson fit_json(const analysis::FitResult& f) {
  OrderedJson j;
  j["model"] = analysis::fit_model_name(f.model);
  j["exponent"] = f.exponent;
  j["coefficient"] = f.coefficient;
  j["r2"] = f.r2;
  j["grid"] = f.grid;
  j["note"] = f.note;
  return j;
}

std::string histogram_text(const std::vector<std::size_t>& h) {
  std::string s;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(h[i]);
  }
  return s;
}

class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& bytes) {
    csv::write_file(dir_ / name, bytes);
    files_.push_back(name);
  }
  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config,
                          const std::optional<fs::path>& outputs_override,
                          std::size_t threads) {
  const fs::path dir = outputs_override ? *outputs_override : fs::path(config.outputs);
  if (dir.empty()) throw ConfigError("outputs", "empty output directory");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::ios_base::failure("cannot create output directory " + dir.string());

  const auto& spec = config.generator;
  const auto& an = config.analysis;
  const double alpha = spec.bounds().alpha;

  csv::Table regret({"n", "policy", "replication", "offline_value", "reward", "regret",
                     "seed_branch"});
  csv::Table regret_summary({"n", "policy", "reps", "mean_offline", "mean_reward",
                             "mean_regret", "stderr_regret"});
  csv::Table deviation({"n", "replication", "j", "deviation", "exited"});
  csv::Table deviation_quantiles({"n", "j", "q10", "q50", "q90"});
  csv::Table exit_summary({"n", "policy", "eps_d", "reps", "mean_exit_margin",
                           "stderr_exit_margin", "exit_histogram"});
  csv::Table populations({"n", "coordinate", "p_star", "bootstrap_sd", "K"});

  std::map<std::size_t, gen::PopulationPrice> prices;
  auto price_for = [&](std::size_t n) -> const gen::PopulationPrice& {
    auto it = prices.find(n);
    if (it == prices.end())
      it = prices
               .emplace(n, gen::population_price(spec, n, 0, config.d0, config.population.K,
                                                 config.seed, config.population.bootstrap))
               .first;
    return it->second;
  };

  std::vector<std::vector<analysis::RegretEstimate>> estimates(config.policies.size());
  for (std::size_t n : config.n_grid) {
    for (std::size_t pi = 0; pi < config.policies.size(); ++pi) {
      const bool for_deviation = an.state_deviation && pi == config.deviation.policy;
      if (!an.regret && !for_deviation) continue;
      const auto& pol = config.policies[pi];
      const analysis::SimulationBatch batch = analysis::simulate(
          spec, pol, n, config.d0, config.reps, config.seed, for_deviation, threads);
      if (an.regret) {
        const auto est = analysis::summarize_regret(batch);
        const std::string name = pol.name();
        for (const auto& o : est.replications)
          regret.row(n, name, o.replication, o.offline_value, o.reward,
                     o.offline_value - o.reward, o.seed_branch);
        regret_summary.row(n, name, est.reps, est.mean_offline, est.mean_reward,
                           est.mean_regret, est.stderr_regret);
        estimates[pi].push_back(est);
      }
      if (for_deviation) {
        const auto& pp = price_for(n);
        const auto delta = gen::delta_path(spec, n, config.d0, pp,
                                           config.population.K_delta, config.seed);
        const auto res =
            analysis::summarize_deviation(batch, delta, config.deviation.eps_d, alpha);
        for (std::size_t r = 0; r < res.deviations.size(); ++r)
          for (std::size_t j = 0; j < n; j += config.deviation.stride)
            deviation.row(n, r, j, res.deviations[r][j], j >= res.exit_times[r]);
        for (std::size_t j = 0; j < n; j += config.deviation.stride)
          deviation_quantiles.row(n, j, res.quantiles[j][0], res.quantiles[j][1],
                                  res.quantiles[j][2]);
        exit_summary.row(n, pol.name(), config.deviation.eps_d, res.exit_times.size(),
                         res.stats.mean_exit_margin, res.stats.stderr_exit_margin,
                         histogram_text(res.stats.exit_histogram));
      }
    }
  }

  csv::Table dual({"n", "replication", "sq_dist"});
  csv::Table dual_summary({"n", "reps", "mse", "stderr_mse", "log_n_over_n"});
  if (an.dual_convergence) {
    std::vector<Vec> p_star;
    for (std::size_t n : config.n_grid) p_star.push_back(price_for(n).p_star);
    const std::size_t reps =
        config.dual_convergence_reps ? config.dual_convergence_reps : config.reps;
    const auto curve = analysis::dual_convergence_curve(spec, config.n_grid, config.d0,
                                                        reps, config.seed, p_star, threads);
    for (const auto& pt : curve) {
      for (std::size_t r = 0; r < pt.sq_dists.size(); ++r) dual.row(pt.n, r, pt.sq_dists[r]);
      const double nd = static_cast<double>(pt.n);
      dual_summary.row(pt.n, pt.sq_dists.size(), pt.mse, pt.stderr_mse, std::log(nd) / nd);
    }
  }
  for (const auto& [n, pp] : prices)
    for (std::size_t i = 0; i < pp.p_star.size(); ++i)
      populations.row(n, i, pp.p_star[i], pp.bootstrap_sd[i], pp.K);

  OrderedJson fits = OrderedJson::array();
  if (an.fit) {
    for (std::size_t pi = 0; pi < config.policies.size(); ++pi) {
      OrderedJson entry;
      entry["policy"] = config.policies[pi].name();
      for (auto model : {analysis::FitModel::kPowerLaw, analysis::FitModel::kPolylog}) {
        try {
          entry[analysis::fit_model_name(model)] =
              fit_json(analysis::fit_scaling(std::span(estimates[pi]), model));
        } catch (const std::invalid_argument& e) {
          entry[analysis::fit_model_name(model)] = {{"error", e.what()}};
        }
      }
      fits.push_back(entry);
    }
  }

  ArtifactWriter out(dir);
  if (an.regret) {
    out.write("regret.csv", regret.text());
    out.write("regret_summary.csv", regret_summary.text());
  }
  if (an.dual_convergence) {
    out.write("dual_convergence.csv", dual.text());
    out.write("dual_convergence_summary.csv", dual_summary.text());
  }
  if (an.state_deviation) {
    out.write("state_deviation.csv", deviation.text());
    out.write("state_deviation_quantiles.csv", deviation_quantiles.text());
    out.write("exit_summary.csv", exit_summary.text());
  }
  if (!prices.empty()) out.write("population_prices.csv", populations.text());
  if (an.fit) out.write("fit.json", fits.dump(2) + "\n");

  OrderedJson manifest;
  manifest["tool"] = "olp-lab";
  manifest["version"] = OLP_VERSION;
  manifest["manifest_version"] = kManifestVersion;
  manifest["config"] = OrderedJson::parse(config_to_json(config));
  OrderedJson seeds;
  seeds["root"] = config.seed;
  seeds["derivation"] =
      "splitmix64 key over (root, stream tag, replication, path, index)";
  seeds["stream_tags"] = {{"instance", static_cast<int>(StreamTag::kInstance)},
                          {"population", static_cast<int>(StreamTag::kPopulation)},
                          {"delta_path", static_cast<int>(StreamTag::kDeltaPath)},
                          {"bootstrap", static_cast<int>(StreamTag::kBootstrap)},
                          {"dual_convergence",
                           static_cast<int>(StreamTag::kDualConvergence)}};
  manifest["seeds"] = seeds;
  manifest["artifacts"] = out.files();
  out.write("run_manifest.json", manifest.dump(2) + "\n");
  return {dir, out.files()};
}

ValidationReport validate_experiment(const ExperimentConfig& config,
                                     std::size_t solver_trials) {
  const auto& spec = config.generator;
  OrderedJson report;
  report["family"] = gen::family_name(spec.family);
  report["m"] = spec.m;
  const auto b = spec.bounds();
  report["bounds"] = {{"alpha", b.alpha},   {"u_bar", b.u_bar},
                      {"mu_lo", b.mu_lo},   {"mu_hi", b.mu_hi},
                      {"lipschitz", b.lipschitz}};

  bool passed = true;
  const auto violations = gen::validate_generator(spec);
  OrderedJson checks;
  for (auto kind : {gen::ViolationKind::kDensityLowerBound,
                    gen::ViolationKind::kDensityUpperBound,
                    gen::ViolationKind::kNormalization, gen::ViolationKind::kSupport,
                    gen::ViolationKind::kSmoothness}) {
    OrderedJson c;
    auto it = std::find_if(violations.begin(), violations.end(),
                           [&](const gen::Violation& v) { return v.kind == kind; });
    c["pass"] = it == violations.end();
    if (it != violations.end()) {
      c["detail"] = it->detail;
      passed = false;
    }
    checks[gen::violation_name(kind)] = c;
  }
  report["generator_checks"] = checks;

  const std::size_t n = config.n_grid.back();
  const auto pp = gen::population_price(spec, n, 0, config.d0, config.population.K,
                                        config.seed, 0);
  const auto nd = gen::nondegeneracy(spec, pp.p_star);
  report["nondegeneracy"] = {{"n", n},
                             {"p_star", pp.p_star},
                             {"inf_ap", nd.inf_ap},
                             {"sup_ap", nd.sup_ap},
                             {"u_bar", nd.u_bar},
                             {"margin", nd.margin},
                             {"note", "reported without pass/fail"}};

  double max_gap = 0.0;
  for (std::size_t t = 0; t < solver_trials; ++t) {
    Stream s(config.seed, StreamTag::kValidation, t, 0, 0);
    const std::size_t count = 1 + s.below(50);
    const double d = 0.1 + 0.9 * s.uniform();
    std::vector<Order> orders;
    for (std::size_t i = 0; i < count; ++i) {
      const double u = s.uniform();
      orders.push_back({u, {0.5 + s.uniform()}});
    }
    const double a = lp::solve_dual_breakpoint(orders, d).objective;
    const double c = lp::solve_dual_simplex(orders, Vec{d}).objective;
    max_gap = std::max(max_gap, std::abs(a - c));
  }
  const bool solver_ok = max_gap < 1e-8;
  passed = passed && solver_ok;
  report["solver_equivalence"] = {{"trials", solver_trials},
                                  {"max_objective_gap", max_gap},
                                  {"tolerance", 1e-8},
                                  {"pass", solver_ok}};
  report["status"] = passed ? "pass" : "fail";
  return {passed, report.dump(2) + "\n"};
}

analysis::FitResult fit_regret_csv(const fs::path& csv_path, analysis::FitModel model,
                                   const std::optional<std::string>& policy) {
  const csv::Document doc = csv::parse(csv::read_file(csv_path));
  const std::size_t cn = doc.column("n");
  const std::size_t cp = doc.column("policy");
  const std::size_t cr = doc.column("regret");
  std::map<std::string, std::map<double, Vec>> by_policy;
  for (const auto& row : doc.rows)
    by_policy[row[cp]][csv::to_double(row[cn])].push_back(csv::to_double(row[cr]));
  if (by_policy.empty()) throw std::invalid_argument("regret csv has no rows");
  std::string chosen;
  if (policy) {
    if (!by_policy.count(*policy))
      throw std::invalid_argument("policy " + *policy + " not found in csv");
    chosen = *policy;
  } else if (by_policy.size() == 1) {
    chosen = by_policy.begin()->first;
  } else {
    throw std::invalid_argument("csv holds several policies; pass --policy");
  }
  std::vector<analysis::ScalingPoint> points;
  for (const auto& [n, regrets] : by_policy[chosen])
    points.push_back({n, analysis::mean(regrets)});
  return analysis::fit_scaling(std::span<const analysis::ScalingPoint>(points), model);
}

std::string fit_to_json(const analysis::FitResult& fit, int indent) {
  return fit_json(fit).dump(indent) + "\n";
}

}  // namespace olp::cli
