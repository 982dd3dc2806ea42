#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "olp/generators.hpp"
#include "olp/policies.hpp"
#include "olp/types.hpp"

namespace olp::analysis {

// A policy or solver failure inside one replication.
class ReplicationError : public std::runtime_error {
 public:
  ReplicationError(const std::string& what, std::size_t n,
                   std::size_t replication, std::optional<std::size_t> step)
      : std::runtime_error(what), n_(n), replication_(replication), step_(step) {}
  std::size_t n() const { return n_; }
  std::size_t replication() const { return replication_; }
  std::optional<std::size_t> step() const { return step_; }

 private:
  std::size_t n_;
  std::size_t replication_;
  std::optional<std::size_t> step_;
};

struct ReplicationOutcome {
  std::size_t replication = 0;
  std::uint64_t seed_branch = 0;
  double offline_value = 0.0;
  double reward = 0.0;
  // Budget b_k before arrival k, k = 0..n-1; filled when paths are kept.
  std::vector<Vec> budgets;
};

struct SimulationBatch {
  gen::GeneratorSpec spec;
  policy::PolicySpec policy;
  std::size_t n = 0;
  Vec d0;
  std::uint64_t seed = 0;
  std::vector<ReplicationOutcome> outcomes;
};

// Runs `policy` on replications 0..reps-1. Replication r uses the instance
// sample_instance(spec, n, d0, seed, r), so different policies at the same
// (n, seed) see common random numbers.
SimulationBatch simulate(const gen::GeneratorSpec& spec,
                         const policy::PolicySpec& policy, std::size_t n,
                         const Vec& d0, std::size_t reps, std::uint64_t seed,
                         bool keep_paths = false, std::size_t threads = 0);

struct RegretEstimate {
  std::size_t n = 0;
  policy::PolicySpec policy;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
  std::size_t reps = 0;
  double mean_offline = 0.0;
  double mean_reward = 0.0;
  std::vector<ReplicationOutcome> replications;
};

RegretEstimate summarize_regret(const SimulationBatch& batch);

RegretEstimate estimate_regret(const gen::GeneratorSpec& spec,
                               const policy::PolicySpec& policy, std::size_t n,
                               const Vec& d0, std::size_t reps,
                               std::uint64_t seed, std::size_t threads = 0);

struct DualConvergencePoint {
  std::size_t n = 0;
  Vec p_star;
  double mse = 0.0;
  double stderr_mse = 0.0;
  Vec sq_dists;  // per replication
};

// Squared distance between the empirical dual price at j = 0 on a fresh path
// and the supplied population price, for every n in the grid.
std::vector<DualConvergencePoint> dual_convergence_curve(
    const gen::GeneratorSpec& spec, std::span<const std::size_t> n_grid,
    const Vec& d0, std::size_t reps, std::uint64_t seed,
    std::span<const Vec> p_star_per_n, std::size_t threads = 0);

struct ExitStats {
  std::size_t n = 0;
  double eps_d = 0.0;
  double mean_exit_margin = 0.0;
  double stderr_exit_margin = 0.0;
  // Counts of n - tau over buckets [0,1), [1,2), [2,4), [4,8), ...
  std::vector<std::size_t> exit_histogram;
  std::string proxy_note;
};

struct DeviationResult {
  ExitStats stats;
  std::vector<std::size_t> exit_times;  // tau per replication, in [1, n]
  std::vector<Vec> deviations;          // [replication][k], k = 0..n-1
  std::vector<std::array<double, 3>> quantiles;  // 10/50/90% per k
};

// Exit-time proxy: first k >= 1 with some b_k(i) < alpha or
// |d_k - delta_k| > eps_d, capped at n.
DeviationResult summarize_deviation(const SimulationBatch& batch,
                                    std::span<const Vec> delta, double eps_d,
                                    double alpha);

DeviationResult state_deviation_paths(const gen::GeneratorSpec& spec,
                                      const policy::PolicySpec& policy,
                                      std::size_t n, const Vec& d0,
                                      std::size_t reps, double eps_d,
                                      std::uint64_t seed,
                                      std::span<const Vec> delta,
                                      std::size_t threads = 0);

enum class FitModel { kPowerLaw, kPolylog };
std::string fit_model_name(FitModel m);

struct ScalingPoint {
  double n = 0.0;
  double value = 0.0;
};

struct FitResult {
  FitModel model = FitModel::kPowerLaw;
  double exponent = 0.0;     // slope in log-log or log-loglog coordinates
  double coefficient = 0.0;  // exp(intercept)
  double r2 = 0.0;
  std::vector<double> grid;
  std::string note;
};

// Least squares of log(value) on log(n) (power law) or log(log n) (polylog).
// Non-positive values are dropped with a note; needs >= 3 usable points.
FitResult fit_scaling(std::span<const ScalingPoint> points, FitModel model);
FitResult fit_scaling(std::span<const RegretEstimate> estimates, FitModel model);

struct ZFieldPoint {
  Vec d;
  Vec mean_drift;
  Vec stderr_drift;
  double drift_norm = 0.0;
};

// One-step conditional drift of d_k - delta_k from state d at step k,
// averaged over K simulated transitions. Each draw uses a fresh single-sample
// suffix; pass `fixed_price` to replace the re-solved price.
std::vector<ZFieldPoint> z_field_probe(const gen::GeneratorSpec& spec,
                                       std::size_t n, std::size_t k,
                                       std::span<const Vec> d_grid,
                                       std::size_t K, std::uint64_t seed,
                                       std::span<const Vec> delta,
                                       const std::optional<Vec>& fixed_price = {});

double mean(std::span<const double> xs);
// Sample standard deviation over sqrt(count).
double standard_error(std::span<const double> xs);

}  // namespace olp::analysis
