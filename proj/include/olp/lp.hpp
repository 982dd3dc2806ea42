#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "olp/simplex.hpp"
#include "olp/types.hpp"

namespace olp::lp {

enum class DualStatus { kOptimal, kUnboundedBelowImpossible, kDegenerateTie };

struct DualSolution {
  Vec p;
  // Normalized objective d.p + (1/N) sum (u_k - a_k.p)^+.
  double objective = 0.0;
  DualStatus status = DualStatus::kOptimal;
  std::optional<std::string> tie_note;
};

struct PrimalSolution {
  Vec x;
  double value = 0.0;
  Vec dual_price;
  std::size_t fractional_count = 0;
};

// d.p + (1/N) sum_k (u_k - a_k.p)^+ over the N supplied orders; d.p if N = 0.
double dual_objective(std::span<const double> p, std::span<const Order> orders,
                      std::span<const double> d);

// d - (1/N) sum_k a_k 1{u_k > a_k.p}. Ties count as rejected.
Vec dual_subgradient(std::span<const double> p, std::span<const Order> orders,
                     std::span<const double> d);

// Scratch buffer for the breakpoint sweep, reusable across calls.
struct BreakpointWorkspace {
  struct Point {
    double price;
    double mass;
  };
  std::vector<Point> points;
};

// Smallest minimizer over p >= 0 of  B*p + sum_k (u_k - a_k p)^+  for a single
// resource, with B >= 0 the (unnormalized) budget. One sort plus a sweep.
// Returns p and whether the optimum is a flat interval starting at p.
struct BreakpointPrice {
  double p = 0.0;
  bool flat = false;
  double flat_end = 0.0;
};
BreakpointPrice breakpoint_price(std::span<const Order> orders, double budget,
                                 BreakpointWorkspace* workspace = nullptr);

// Exact minimizer of the normalized dual for m = 1 (smallest on ties).
DualSolution solve_dual_breakpoint(std::span<const Order> orders, double d);

// Normalized dual for any m through the dense simplex: the resource rows'
// multipliers of  max sum u_k x_k, sum a_k x_k <= N d, 0 <= x <= 1  are the
// optimal p of  min d.p + (1/N) sum y_k, y_k >= u_k - a_k.p, y, p >= 0.
DualSolution solve_dual_simplex(std::span<const Order> orders,
                                std::span<const double> d);

// Argmin of the unnormalized re-solve objective b.p + sum (u_k - a_k.p)^+.
// Uses the breakpoint sweep when m = 1 and the simplex otherwise.
Vec resolve_price(std::span<const Order> orders, std::span<const double> budget,
                  BreakpointWorkspace* workspace = nullptr);

// Offline fractional LP  max sum u_k x_k, sum a_k x_k <= b, 0 <= x <= 1.
// Greedy ratio fill for m = 1, dense simplex otherwise.
PrimalSolution solve_offline_fractional(std::span<const Order> orders,
                                        std::span<const double> b);

// 1{u > a.p} * 1{remaining >= a entrywise}.
bool accept_decision(const Order& order, std::span<const double> p,
                     std::span<const double> remaining);

}  // namespace olp::lp
