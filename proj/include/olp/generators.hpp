#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "olp/rng.hpp"
#include "olp/types.hpp"

namespace olp::gen {

enum class Family {
  kStationaryUniform,
  kLinearDrift,
  kSinusoidal,
  kTwoPhaseExample1,
  kCustomTable,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);  // throws invalid_argument

// Consumption vectors are stationary: either a constant vector (point mass)
// or independent uniforms on a box.
struct Consumption {
  enum class Kind { kConstant, kBox };
  Kind kind = Kind::kConstant;
  Vec value{1.0};
  Vec lo;
  Vec hi;
};

// Every shipped family draws the reward given the consumption from a tilted
// uniform law on [lo, hi]:
//   f(u) = (1 + s * (2 (u - lo) / w - 1)) / w,   w = hi - lo,  |s| <= 1,
// where the tilt s = s(t) carries the nonstationarity.
//   stationary_uniform: s = 0 on [0, u_max]
//   linear_drift:       s(t) = tilt_start + (tilt_end - tilt_start) t
//   sinusoidal:         s(t) = tilt_mean + tilt_amplitude sin(2 pi cycles t)
//   custom_table:       s(t) piecewise linear through (table_t, table_tilt)
//   two_phase_example1: U(0,1) for orders j <= ceil(n/2) (1-based), then
//                       U(2,3) when `shifted` (P2), U(0,1) otherwise (P1)
struct GeneratorParams {
  double u_max = 1.0;
  double tilt_start = 0.0;
  double tilt_end = 0.0;
  double tilt_mean = 0.0;
  double tilt_amplitude = 0.0;
  double cycles = 1.0;
  Vec table_t;
  Vec table_tilt;
  bool shifted = true;
  Consumption consumption;
};

// Regularity constants declared by a family: consumption bound alpha,
// reward bound u_bar, density bounds [mu_lo, mu_hi] and gradient bound.
struct Bounds {
  double alpha = 0.0;
  double u_bar = 0.0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  double lipschitz = 0.0;
};

struct GeneratorSpec {
  Family family = Family::kStationaryUniform;
  std::size_t m = 1;
  GeneratorParams params;
  // Optional overrides; a negative entry keeps the family's own value.
  Bounds declared{-1.0, -1.0, -1.0, -1.0, -1.0};

  Bounds bounds() const;
};

GeneratorSpec stationary_uniform(double u_max = 1.0, Consumption c = {});
GeneratorSpec linear_drift(double tilt_start, double tilt_end,
                           double u_max = 1.0, Consumption c = {});
GeneratorSpec sinusoidal(double tilt_mean, double tilt_amplitude,
                         double cycles = 1.0, double u_max = 1.0,
                         Consumption c = {});
GeneratorSpec two_phase_example1(bool shifted = true);
GeneratorSpec custom_table(Vec knots, Vec tilts, double u_max = 1.0,
                           Consumption c = {});
Consumption box_consumption(Vec lo, Vec hi);
Consumption constant_consumption(Vec value);

// Reward law at one index or time: tilted uniform on [lo, hi].
struct RewardLaw {
  double lo = 0.0;
  double hi = 1.0;
  double tilt = 0.0;

  double density(double u) const;
  double quantile(double q) const;
  double survival(double u) const;  // P(reward > u)
};

RewardLaw reward_law_at_time(const GeneratorSpec& spec, double t);
RewardLaw reward_law_at_index(const GeneratorSpec& spec, std::size_t index,
                              std::size_t n);

// Order from m + 1 uniforms: the first m drive the consumption, the last one
// the reward quantile.
Order order_from_uniforms(const GeneratorSpec& spec, std::size_t index,
                          std::size_t n, std::span<const double> uniforms);

// Draw order `index` (0-based) of an n-horizon episode.
Order sample_order(const GeneratorSpec& spec, std::size_t index, std::size_t n,
                   Stream& stream);

// Real path from (seed, replication, path 0), single sample from path 1.
Instance sample_instance(const GeneratorSpec& spec, std::size_t n, const Vec& d0,
                         std::uint64_t seed, std::uint64_t replication = 0);

double density_v(const GeneratorSpec& spec, double t, std::span<const double> a);
double density_f(const GeneratorSpec& spec, double t, std::span<const double> a,
                 double u);

enum class ViolationKind {
  kDensityLowerBound,
  kDensityUpperBound,
  kNormalization,
  kSupport,
  kSmoothness,
};
std::string violation_name(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct GridSizes {
  std::size_t t = 101;
  std::size_t u = 101;
  std::size_t a = 5;
};

// Grid checks of the boundedness/smoothness contract. At most one entry per
// violation kind, carrying the worst offender.
std::vector<Violation> validate_generator(const GeneratorSpec& spec,
                                          const GridSizes& grid = {});

struct PopulationPrice {
  Vec p_star;
  std::size_t n = 0;
  std::size_t start = 0;
  Vec d;
  std::size_t K = 0;
  Vec bootstrap_sd;  // per-coordinate spread over bootstrap resamples
  std::string stderr_note;
};

// SAA of the population dual over orders start..n-1 with K Latin-hypercube
// pseudo-samples per index.
PopulationPrice population_price(const GeneratorSpec& spec, std::size_t n,
                                 std::size_t start, const Vec& d, std::size_t K,
                                 std::uint64_t seed,
                                 std::size_t bootstrap = 20);

// delta_k(d0) = (n d0 - sum_{i<k} E[a_i 1{u_i > a_i.p*}]) / (n - k), k = 0..n-1,
// with each expectation estimated from K stratified samples.
std::vector<Vec> delta_path(const GeneratorSpec& spec, std::size_t n,
                            const Vec& d0, const PopulationPrice& p_star,
                            std::size_t K, std::uint64_t seed);

// inf and sup of a.p over the consumption support, for the non-degeneracy
// report (no pass/fail semantics).
struct NondegeneracyEstimate {
  double inf_ap = 0.0;
  double sup_ap = 0.0;
  double u_bar = 0.0;
  double margin = 0.0;  // min(inf_ap, u_bar - sup_ap)
};
NondegeneracyEstimate nondegeneracy(const GeneratorSpec& spec,
                                    std::span<const double> p_star);

// E[sum of the k largest of n iid Uniform(0,1)] = k (2n - k + 1) / (2 (n + 1)).
double expected_top_k_uniform(std::size_t k, std::size_t n);

// Expected offline LP value for the two-phase construction with budget n d0.
double example1_expected_offline(std::size_t n, bool shifted, double d0 = 0.25);

}  // namespace olp::gen
