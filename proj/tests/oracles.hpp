#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the solvers under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "olp/rng.hpp"
#include "olp/types.hpp"

namespace oracle {

using olp::Order;
using olp::Vec;

inline double naive_dual(const Vec& p, const std::vector<Order>& orders, const Vec& d) {
  double v = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) v += d[i] * p[i];
  if (orders.empty()) return v;
  double s = 0.0;
  for (const Order& o : orders) {
    double ap = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) ap += o.a[i] * p[i];
    s += std::max(0.0, o.u - ap);
  }
  return v + s / static_cast<double>(orders.size());
}

struct GridMin {
  double p = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

// Exhaustive scan of the m = 1 dual over {0, step, 2 step, ..} up to hi.
inline GridMin grid_dual_min(const std::vector<Order>& orders, double d, double step,
                             double hi) {
  GridMin best;
  const auto count = static_cast<std::size_t>(std::ceil(hi / step));
  for (std::size_t g = 0; g <= count; ++g) {
    const double p = static_cast<double>(g) * step;
    const double v = naive_dual({p}, orders, {d});
    if (v < best.value) best = {p, v};
  }
  return best;
}

// Minimum of the m = 1 dual over the candidate set {0} and every u/a.
inline GridMin candidate_dual_min(const std::vector<Order>& orders, double d) {
  GridMin best{0.0, naive_dual({0.0}, orders, {d})};
  for (const Order& o : orders) {
    if (o.a[0] <= 0.0) continue;
    const double c = std::max(0.0, o.u / o.a[0]);
    const double v = naive_dual({c}, orders, {d});
    if (v < best.value || (v == best.value && c < best.p)) best = {c, v};
  }
  return best;
}

// m = 1 LP optimum by enumerating vertices: a 0/1 set plus at most one
// fractional order.
inline double vertex_offline_m1(const std::vector<Order>& orders, double b) {
  const std::size_t n = orders.size();
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double used = 0.0, value = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (mask & (1u << k)) {
        used += orders[k].a[0];
        value += orders[k].u;
      }
    if (used > b + 1e-12) continue;
    best = std::max(best, value);
    for (std::size_t f = 0; f < n; ++f) {
      if (mask & (1u << f)) continue;
      if (orders[f].a[0] <= 0.0) continue;
      const double frac = std::min(1.0, (b - used) / orders[f].a[0]);
      best = std::max(best, value + frac * orders[f].u);
    }
  }
  return best;
}

inline double ks_distance(Vec x, Vec y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t i = 0, j = 0;
  double worst = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    const double fx = static_cast<double>(i) / static_cast<double>(x.size());
    const double fy = static_cast<double>(j) / static_cast<double>(y.size());
    worst = std::max(worst, std::abs(fx - fy));
  }
  return worst;
}

inline double correlation(const Vec& x, const Vec& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Orders with u ~ U(0,1) and a entries ~ U(a_lo, a_hi).
inline std::vector<Order> random_orders(olp::Stream& s, std::size_t count, std::size_t m,
                                        double a_lo = 0.5, double a_hi = 1.5) {
  std::vector<Order> out;
  for (std::size_t k = 0; k < count; ++k) {
    Order o;
    o.u = s.uniform();
    for (std::size_t i = 0; i < m; ++i) o.a.push_back(a_lo + (a_hi - a_lo) * s.uniform());
    out.push_back(o);
  }
  return out;
}

}  // namespace oracle
