#include <cmath>

#include "doctest.h"
#include "olp/lp.hpp"
#include "olp/rng.hpp"
#include "oracles.hpp"

using olp::Order;
using olp::Vec;
namespace lp = olp::lp;

namespace {

const std::vector<Order> kTwo = {{1.0, {1.0}}, {0.4, {1.0}}};

Vec random_price(olp::Stream& s, std::size_t m, double scale) {
  Vec p(m);
  for (auto& v : p) v = scale * s.uniform();
  return p;
}

}  // namespace

TEST_CASE("dual objective examples") {
  CHECK(lp::dual_objective(Vec{0.0}, std::vector<Order>{{1.0, {1.0}}}, Vec{0.5}) == 1.0);
  CHECK(lp::dual_objective(Vec{2.0}, std::vector<Order>{{1.0, {1.0}}}, Vec{0.5}) == 1.0);
  CHECK(lp::dual_objective(Vec{0.7}, kTwo, Vec{0.5}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(lp::dual_objective(Vec{0.3}, std::vector<Order>{}, Vec{0.5}) == doctest::Approx(0.15));
  CHECK_THROWS_AS(lp::dual_objective(Vec{-0.1}, kTwo, Vec{0.5}), std::invalid_argument);
}

TEST_CASE("dual subgradient examples") {
  CHECK(lp::dual_subgradient(Vec{0.0}, kTwo, Vec{0.5})[0] == -0.5);
  CHECK(lp::dual_subgradient(Vec{0.7}, kTwo, Vec{0.5})[0] == 0.0);
  CHECK(lp::dual_subgradient(Vec{2.0}, kTwo, Vec{0.5})[0] == 0.5);
  // Tie at p = 0.4 counts as rejected.
  CHECK(lp::dual_subgradient(Vec{0.4}, kTwo, Vec{0.5})[0] == 0.0);
  CHECK_THROWS_AS(lp::dual_subgradient(Vec{-1.0}, kTwo, Vec{0.5}), std::invalid_argument);
}

TEST_CASE("subgradient matches finite differences away from breakpoints") {
  const double h = 1e-7;
  for (double p : {0.2, 0.7, 1.5}) {
    const double fd = (lp::dual_objective(Vec{p + h}, kTwo, Vec{0.5}) -
                       lp::dual_objective(Vec{p}, kTwo, Vec{0.5})) / h;
    CHECK(lp::dual_subgradient(Vec{p}, kTwo, Vec{0.5})[0] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("breakpoint solver returns the smallest minimizer") {
  const auto sol = lp::solve_dual_breakpoint(kTwo, 0.5);
  CHECK(sol.p[0] == 0.4);
  CHECK(sol.objective == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sol.status == lp::DualStatus::kDegenerateTie);
  REQUIRE(sol.tie_note);
  const auto grid = oracle::grid_dual_min(kTwo, 0.5, 1e-5, 1.2);
  CHECK(grid.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(grid.p == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("breakpoint solver edge cases") {
  CHECK(lp::solve_dual_breakpoint(std::vector<Order>{}, 0.5).p[0] == 0.0);
  CHECK(lp::solve_dual_breakpoint(std::vector<Order>{}, 0.5).objective == 0.0);
  CHECK_THROWS_AS(lp::solve_dual_breakpoint(kTwo, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lp::solve_dual_breakpoint(kTwo, -1.0), std::invalid_argument);
  // Abundant budget: price zero.
  CHECK(lp::solve_dual_breakpoint(kTwo, 1.0).p[0] == 0.0);
  // Zero-consumption orders add a constant and no breakpoint.
  const std::vector<Order> with_free = {{1.0, {1.0}}, {0.4, {1.0}}, {0.3, {0.0}}};
  const auto sol = lp::solve_dual_breakpoint(with_free, 1.0 / 3.0);
  CHECK(sol.p[0] == 0.4);
  CHECK(sol.objective == doctest::Approx(oracle::naive_dual({0.4}, with_free, {1.0 / 3.0})));
}

TEST_CASE("breakpoint solver matches exhaustive candidate search") {
  olp::Stream s(11, olp::StreamTag::kTest, 0, 0, 0);
  std::vector<Order> orders;
  for (int k = 0; k < 100; ++k) orders.push_back({s.uniform(), {1.0}});
  const auto sol = lp::solve_dual_breakpoint(orders, 0.25);
  const auto best = oracle::candidate_dual_min(orders, 0.25);
  CHECK(sol.p[0] == best.p);
  // 25 of 100 orders fit, so the price is the 26th largest reward.
  std::vector<double> us;
  for (const auto& o : orders) us.push_back(o.u);
  std::sort(us.rbegin(), us.rend());
  CHECK(sol.p[0] == us[25]);
}

TEST_CASE("breakpoint optimality over all candidates") {
  olp::Stream s(12, olp::StreamTag::kTest, 0, 0, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + s.below(40);
    const auto orders = oracle::random_orders(s, n, 1);
    const double d = 0.1 + 0.9 * s.uniform();
    const auto sol = lp::solve_dual_breakpoint(orders, d);
    CHECK(sol.objective == doctest::Approx(oracle::naive_dual(sol.p, orders, {d})).epsilon(1e-12));
    for (const auto& o : orders) {
      const double c = o.u / o.a[0];
      CHECK(oracle::naive_dual({c}, orders, {d}) >= sol.objective - 1e-12);
    }
    CHECK(oracle::naive_dual({0.0}, orders, {d}) >= sol.objective - 1e-12);
    double umax = 0.0;
    for (const auto& o : orders) umax = std::max(umax, o.u);
    CHECK(sol.p[0] <= umax / d + 1e-9);
  }
}

TEST_CASE("simplex dual examples") {
  const std::vector<Order> zero = {{0.0, {1.0}}, {0.0, {2.0}}};
  const auto z = lp::solve_dual_simplex(zero, Vec{0.3});
  CHECK(z.p[0] == 0.0);
  CHECK(z.objective == 0.0);

  const std::vector<Order> two = {{1.0, {1.0, 0.0}}, {1.0, {0.0, 1.0}}};
  const auto sol = lp::solve_dual_simplex(two, Vec{1.0, 1.0});
  CHECK(sol.p == Vec{0.0, 0.0});
  CHECK(sol.objective == doctest::Approx(1.0));
  const auto g = lp::dual_subgradient(sol.p, two, Vec{1.0, 1.0});
  CHECK(g[0] >= 0.0);
  CHECK(g[1] >= 0.0);
}

TEST_CASE("simplex and breakpoint agree for one resource") {
  olp::Stream s(13, olp::StreamTag::kTest, 0, 0, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + s.below(50);
    const auto orders = oracle::random_orders(s, n, 1);
    const double d = 0.1 + 0.9 * s.uniform();
    const auto a = lp::solve_dual_breakpoint(orders, d);
    const auto b = lp::solve_dual_simplex(orders, Vec{d});
    CHECK(std::abs(a.objective - b.objective) < 1e-8);
  }
}

TEST_CASE("multi-resource dual matches a price grid") {
  olp::Stream s(14, olp::StreamTag::kTest, 0, 0, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto orders = oracle::random_orders(s, 12, 2);
    const Vec d{0.2 + 0.5 * s.uniform(), 0.2 + 0.5 * s.uniform()};
    const auto sol = lp::solve_dual_simplex(orders, d);
    CHECK(sol.p[0] >= 0.0);
    CHECK(sol.p[1] >= 0.0);
    CHECK(sol.objective == doctest::Approx(oracle::naive_dual(sol.p, orders, d)).epsilon(1e-9));
    double best = 1e300;
    for (int i = 0; i <= 250; ++i)
      for (int j = 0; j <= 250; ++j)
        best = std::min(best, oracle::naive_dual({i * 0.01, j * 0.01}, orders, d));
    CHECK(sol.objective <= best + 1e-12);
    CHECK(sol.objective >= best - 0.05);
  }
}

TEST_CASE("offline fractional examples") {
  const auto a = lp::solve_offline_fractional(kTwo, Vec{1.0});
  CHECK(a.value == 1.0);
  CHECK(a.x == Vec{1.0, 0.0});
  CHECK(a.value == oracle::vertex_offline_m1(kTwo, 1.0));
  const auto b = lp::solve_offline_fractional(kTwo, Vec{0.0});
  CHECK(b.value == 0.0);
  CHECK(b.x == Vec{0.0, 0.0});
  const auto c = lp::solve_offline_fractional(kTwo, Vec{2.0});
  CHECK(c.value == doctest::Approx(1.4));
  CHECK(c.x == Vec{1.0, 1.0});
  CHECK_THROWS_AS(lp::solve_offline_fractional(kTwo, Vec{-1.0}), std::invalid_argument);
}

TEST_CASE("offline fractional matches vertex enumeration") {
  olp::Stream s(15, olp::StreamTag::kTest, 0, 0, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + s.below(10);
    const auto orders = oracle::random_orders(s, n, 1);
    const double b = 4.0 * s.uniform();
    const auto sol = lp::solve_offline_fractional(orders, Vec{b});
    CHECK(sol.value == doctest::Approx(oracle::vertex_offline_m1(orders, b)).epsilon(1e-12));
    CHECK(sol.fractional_count <= 1);
  }
}

TEST_CASE("strong duality and basic-solution structure") {
  olp::Stream s(16, olp::StreamTag::kTest, 0, 0, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + s.below(50);
    const std::size_t m = 1 + s.below(3);
    const auto orders = oracle::random_orders(s, n, m, 0.0, 1.0);
    Vec b(m);
    for (auto& v : b) v = static_cast<double>(n) * (0.05 + 0.5 * s.uniform());
    const auto sol = lp::solve_offline_fractional(orders, b);
    Vec d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = b[i] / static_cast<double>(n);
    const double dual = static_cast<double>(n) * oracle::naive_dual(sol.dual_price, orders, d);
    CHECK(std::abs(sol.value - dual) < 1e-8);
    std::size_t fractional = 0;
    for (std::size_t i = 0; i < m; ++i) {
      double used = 0.0;
      for (std::size_t k = 0; k < n; ++k) used += orders[k].a[i] * sol.x[k];
      CHECK(used <= b[i] + 1e-9);
    }
    for (double x : sol.x) {
      CHECK(x >= 0.0);
      CHECK(x <= 1.0);
      if (x > 1e-9 && x < 1 - 1e-9) ++fractional;
    }
    CHECK(fractional <= m);
    CHECK(sol.fractional_count == fractional);
  }
}

TEST_CASE("convexity of the dual objective") {
  olp::Stream s(17, olp::StreamTag::kTest, 0, 0, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + s.below(3);
    const auto orders = oracle::random_orders(s, 1 + s.below(30), m, 0.0, 1.5);
    const Vec d = random_price(s, m, 1.0);
    const Vec p1 = random_price(s, m, 2.0), p2 = random_price(s, m, 2.0);
    const double lam = s.uniform();
    Vec mix(m);
    for (std::size_t i = 0; i < m; ++i) mix[i] = lam * p1[i] + (1 - lam) * p2[i];
    CHECK(lp::dual_objective(mix, orders, d) <=
          lam * lp::dual_objective(p1, orders, d) +
              (1 - lam) * lp::dual_objective(p2, orders, d) + 1e-12);
  }
}

TEST_CASE("subgradient inequality") {
  olp::Stream s(18, olp::StreamTag::kTest, 0, 0, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 1 + s.below(3);
    const auto orders = oracle::random_orders(s, 1 + s.below(30), m, 0.0, 1.5);
    const Vec d = random_price(s, m, 1.0);
    const Vec p = random_price(s, m, 2.0), q = random_price(s, m, 2.0);
    const Vec g = lp::dual_subgradient(p, orders, d);
    double lin = lp::dual_objective(p, orders, d);
    for (std::size_t i = 0; i < m; ++i) lin += g[i] * (q[i] - p[i]);
    CHECK(lp::dual_objective(q, orders, d) >= lin - 1e-12);
  }
}

TEST_CASE("resolve price is invariant to objective scaling") {
  olp::Stream s(19, olp::StreamTag::kTest, 0, 0, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + s.below(2);
    const std::size_t n = 2 + s.below(30);
    const auto orders = oracle::random_orders(s, n, m);
    Vec budget(m), d(m);
    for (std::size_t i = 0; i < m; ++i) {
      d[i] = 0.1 + 0.6 * s.uniform();
      budget[i] = d[i] * static_cast<double>(n);
    }
    const Vec p = lp::resolve_price(orders, budget);
    const Vec q = m == 1 ? lp::solve_dual_breakpoint(orders, d[0]).p
                         : lp::solve_dual_simplex(orders, d).p;
    if (m == 1) {
      CHECK(p == q);
    } else {
      CHECK(lp::dual_objective(p, orders, d) ==
            doctest::Approx(lp::dual_objective(q, orders, d)).epsilon(1e-10));
    }
  }
}

TEST_CASE("accept decision") {
  const Order o{0.9, {1.0}};
  CHECK(lp::accept_decision(o, Vec{0.5}, Vec{3.0}));
  CHECK_FALSE(lp::accept_decision(Order{0.5, {1.0}}, Vec{0.5}, Vec{3.0}));
  CHECK_FALSE(lp::accept_decision(o, Vec{0.5}, Vec{0.5}));
  CHECK(lp::accept_decision(Order{0.9, {1.0, 0.0}}, Vec{0.5, 7.0}, Vec{1.0, 0.0}));
  CHECK_FALSE(lp::accept_decision(Order{0.9, {1.0, 0.1}}, Vec{0.0, 0.0}, Vec{1.0, 0.0}));
}
