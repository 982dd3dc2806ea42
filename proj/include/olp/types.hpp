#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace olp {

using Vec = std::vector<double>;

// Index convention: every sequence in this library is 0-based. Order k
// (0-based) is the 1-based order j = k + 1 and arrives at normalized time
// t = (k + 1) / n. The state before order k arrives is b_k with b_0 = n * d0,
// and d_k = b_k / (n - k) for k < n.
inline double arrival_time(std::size_t index, std::size_t n) {
  return static_cast<double>(index + 1) / static_cast<double>(n);
}

// One arrival: reward and per-resource consumption.
struct Order {
  double u = 0.0;
  Vec a;
};

// RNG stream identifiers an instance was drawn from.
struct SeedInfo {
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  std::uint64_t real_path = 0;
  std::uint64_t tilde_path = 1;
};

// A realized episode: the real order sequence plus the independent
// single-sample sequence used by the online policy.
struct Instance {
  std::size_t n = 0;
  std::size_t m = 0;
  Vec d0;
  std::vector<Order> orders;
  std::vector<Order> tilde_orders;
  SeedInfo seed_info;
  // Declared generator bounds (alpha, u_bar) the orders must respect. A
  // non-positive value disables the corresponding check.
  double alpha = 0.0;
  double u_bar = 0.0;

  Vec initial_budget() const;
};

// Result of running one policy on one instance.
struct RunRecord {
  std::vector<std::uint8_t> decisions;
  std::vector<Vec> prices;     // price used before each arrival
  std::vector<Vec> remaining;  // remaining budget after each arrival
  double total_reward = 0.0;
  bool feasible = true;
  bool online = true;  // false for hindsight diagnostics
};

// Average remaining resource along a run, optionally against a reference.
struct Trajectory {
  std::vector<Vec> d_path;
  std::optional<std::vector<Vec>> delta_ref;
  std::optional<Vec> deviations;
};

// Every Instance invariant violation; empty iff the instance is valid.
std::vector<std::string> validate_instance(const Instance& inst);

// Budget recurrence, nonnegativity and reward consistency of a run.
std::vector<std::string> validate_run_record(const RunRecord& record,
                                             const Instance& inst);

// d_k = b_k / (n - k) for k = 0..n-1, with deviations when delta is given.
Trajectory make_trajectory(const RunRecord& record, const Instance& inst,
                           const std::vector<Vec>* delta = nullptr);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double min_entry(std::span<const double> x);

}  // namespace olp
