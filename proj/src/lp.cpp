#include "olp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace olp::lp {
namespace {

void require_nonnegative(std::span<const double> p, const char* what) {
  for (double v : p)
    if (!(v >= 0.0))
      throw std::invalid_argument(std::string(what) + ": price entry negative");
}

void require_dimension(std::span<const Order> orders, std::size_t m,
                       const char* what) {
  for (const Order& o : orders)
    if (o.a.size() != m)
      throw std::invalid_argument(std::string(what) +
                                  ": consumption length mismatch");
}

}  // namespace

double dual_objective(std::span<const double> p, std::span<const Order> orders,
                      std::span<const double> d) {
  require_nonnegative(p, "dual_objective");
  if (p.size() != d.size())
    throw std::invalid_argument("dual_objective: p and d differ in length");
  require_dimension(orders, p.size(), "dual_objective");
  double slack = 0.0;
  for (const Order& o : orders) slack += std::max(0.0, o.u - dot(o.a, p));
  const double base = dot(d, p);
  if (orders.empty()) return base;
  return base + slack / static_cast<double>(orders.size());
}

Vec dual_subgradient(std::span<const double> p, std::span<const Order> orders,
                     std::span<const double> d) {
  require_nonnegative(p, "dual_subgradient");
  if (p.size() != d.size())
    throw std::invalid_argument("dual_subgradient: p and d differ in length");
  require_dimension(orders, p.size(), "dual_subgradient");
  Vec g(d.begin(), d.end());
  if (orders.empty()) return g;
  Vec accepted(p.size(), 0.0);
  for (const Order& o : orders) {
    if (o.u > dot(o.a, p))
      for (std::size_t i = 0; i < p.size(); ++i) accepted[i] += o.a[i];
  }
  const double inv = 1.0 / static_cast<double>(orders.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= accepted[i] * inv;
  return g;
}

BreakpointPrice breakpoint_price(std::span<const Order> orders, double budget,
                                 BreakpointWorkspace* workspace) {
  if (!(budget >= 0.0))
    throw std::invalid_argument("breakpoint_price: budget must be >= 0");
  BreakpointWorkspace local;
  auto& pts = (workspace ? *workspace : local).points;
  pts.clear();
  for (const Order& o : orders) {
    if (o.a.size() != 1)
      throw std::invalid_argument("breakpoint_price: requires m = 1");
    const double a = o.a[0];
    if (a < 0.0) throw std::invalid_argument("breakpoint_price: negative a");
    if (a == 0.0) continue;  // constant term, no breakpoint
    pts.push_back({std::max(0.0, o.u) / a, a});
  }

  BreakpointPrice out;
  if (pts.empty()) {
    out.flat = budget == 0.0;
    out.flat_end = kInfinity;
    return out;
  }
  std::sort(pts.begin(), pts.end(),
            [](const auto& x, const auto& y) { return x.price > y.price; });

  // Right derivative at p is  budget - (mass of breakpoints strictly above p).
  // Walk groups from the top; `above` is the mass strictly above the group.
  double above = 0.0;
  double candidate = pts.front().price;
  double candidate_mass = 0.0;
  double previous_price = kInfinity;
  double candidate_prev = kInfinity;
  std::size_t i = 0;
  bool exhausted = true;
  while (i < pts.size()) {
    const double c = pts[i].price;
    if (above > budget) {
      exhausted = false;
      break;
    }
    candidate = c;
    candidate_mass = above;
    candidate_prev = previous_price;
    double group = 0.0;
    while (i < pts.size() && pts[i].price == c) group += pts[i++].mass;
    above += group;
    previous_price = c;
  }
  if (exhausted && candidate > 0.0 && above <= budget) {
    // Even the full mass fits: the derivative at 0 is already >= 0.
    out.p = 0.0;
    out.flat = above == budget;
    out.flat_end = candidate;
    return out;
  }
  out.p = candidate;
  out.flat = candidate_mass == budget;
  out.flat_end = candidate_prev;
  return out;
}

DualSolution solve_dual_breakpoint(std::span<const Order> orders, double d) {
  if (!(d > 0.0))
    throw std::invalid_argument("solve_dual_breakpoint: d must be positive");
  DualSolution sol;
  sol.p = {0.0};
  if (orders.empty()) return sol;
  const double budget = d * static_cast<double>(orders.size());
  const BreakpointPrice bp = breakpoint_price(orders, budget);
  sol.p[0] = bp.p;
  const double dd[1] = {d};
  sol.objective = dual_objective(sol.p, orders, dd);
  if (bp.flat) {
    sol.status = DualStatus::kDegenerateTie;
    std::ostringstream os;
    os << "flat optimum on [" << bp.p << ", " << bp.flat_end << "]";
    sol.tie_note = os.str();
  }
  return sol;
}

namespace {

BoundedLp build_primal(std::span<const Order> orders,
                       std::span<const double> budget) {
  BoundedLp lp;
  lp.rows = budget.size();
  lp.cols = orders.size();
  lp.A.assign(lp.rows * lp.cols, 0.0);
  lp.b.assign(budget.begin(), budget.end());
  lp.c.resize(lp.cols);
  lp.upper.assign(lp.cols, 1.0);
  for (std::size_t k = 0; k < lp.cols; ++k) {
    lp.c[k] = orders[k].u;
    for (std::size_t i = 0; i < lp.rows; ++i) lp.at(i, k) = orders[k].a[i];
  }
  return lp;
}

}  // namespace

DualSolution solve_dual_simplex(std::span<const Order> orders,
                                std::span<const double> d) {
  if (orders.empty())
    throw std::invalid_argument("solve_dual_simplex: needs at least one order");
  if (d.empty()) throw std::invalid_argument("solve_dual_simplex: m = 0");
  require_dimension(orders, d.size(), "solve_dual_simplex");
  Vec budget(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] >= 0.0))
      throw std::invalid_argument("solve_dual_simplex: d must be >= 0");
    budget[i] = d[i] * static_cast<double>(orders.size());
  }
  const SimplexResult res = solve_bounded(build_primal(orders, budget));
  DualSolution sol;
  sol.p = res.duals;
  sol.objective = dual_objective(sol.p, orders, d);
  return sol;
}

Vec resolve_price(std::span<const Order> orders, std::span<const double> budget,
                  BreakpointWorkspace* workspace) {
  if (orders.empty()) return Vec(budget.size(), 0.0);
  if (budget.size() == 1)
    return {breakpoint_price(orders, budget[0], workspace).p};
  require_dimension(orders, budget.size(), "resolve_price");
  return solve_bounded(build_primal(orders, budget)).duals;
}

PrimalSolution solve_offline_fractional(std::span<const Order> orders,
                                        std::span<const double> b) {
  for (double v : b)
    if (!(v >= 0.0))
      throw std::invalid_argument("solve_offline_fractional: negative budget");
  require_dimension(orders, b.size(), "solve_offline_fractional");
  PrimalSolution sol;
  sol.x.assign(orders.size(), 0.0);
  sol.dual_price.assign(b.size(), 0.0);
  if (orders.empty()) return sol;

  if (b.size() == 1) {
    std::vector<std::size_t> idx;
    idx.reserve(orders.size());
    for (std::size_t k = 0; k < orders.size(); ++k) {
      if (orders[k].a[0] == 0.0) {
        if (orders[k].u > 0.0) sol.x[k] = 1.0;
      } else {
        idx.push_back(k);
      }
    }
    auto ratio = [&](std::size_t k) { return orders[k].u / orders[k].a[0]; };
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
      return ratio(x) > ratio(y);
    });
    double left = b[0];
    for (std::size_t k : idx) {
      if (!(orders[k].u > 0.0)) break;
      const double a = orders[k].a[0];
      if (a <= left) {
        sol.x[k] = 1.0;
        left -= a;
      } else {
        sol.x[k] = left / a;
        sol.dual_price[0] = ratio(k);
        break;
      }
    }
  } else {
    const SimplexResult res = solve_bounded(build_primal(orders, b));
    sol.x = res.x;
    sol.dual_price = res.duals;
  }
  for (std::size_t k = 0; k < orders.size(); ++k) {
    sol.value += orders[k].u * sol.x[k];
    if (sol.x[k] > 0.0 && sol.x[k] < 1.0) ++sol.fractional_count;
  }
  return sol;
}

bool accept_decision(const Order& order, std::span<const double> p,
                     std::span<const double> remaining) {
  if (!(order.u > dot(order.a, p))) return false;
  for (std::size_t i = 0; i < remaining.size(); ++i)
    if (!(remaining[i] >= order.a[i])) return false;
  return true;
}

}  // namespace olp::lp
