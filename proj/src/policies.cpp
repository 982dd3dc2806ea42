#include "olp/policies.hpp"

#include <sstream>

#include "olp/lp.hpp"

namespace olp::policy {

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::kResolveSingleSample: return "resolve_single_sample";
    case Kind::kOneShotSingleSample: return "one_shot_single_sample";
    case Kind::kFixedPrice: return "fixed_price";
    case Kind::kGreedyAccept: return "greedy_accept";
    case Kind::kOracleOfflinePrice: return "oracle_offline_price";
  }
  return "unknown";
}

Kind kind_from_name(const std::string& name) {
  for (Kind k : {Kind::kResolveSingleSample, Kind::kOneShotSingleSample,
                 Kind::kFixedPrice, Kind::kGreedyAccept,
                 Kind::kOracleOfflinePrice})
    if (kind_name(k) == name) return k;
  throw std::invalid_argument("unknown policy kind '" + name + "'");
}

std::string PolicySpec::name() const {
  if (kind != Kind::kFixedPrice) return kind_name(kind);
  std::ostringstream os;
  os << "fixed_price(";
  for (std::size_t i = 0; i < price.size(); ++i) os << (i ? ";" : "") << price[i];
  os << ")";
  return os.str();
}

namespace {

// Runs the accept/reject loop; `price_at(k, budget)` supplies the price in
// force before arrival k.
template <class PriceFn>
RunRecord simulate(const Instance& inst, PriceFn&& price_at) {
  RunRecord rec;
  const std::size_t n = inst.orders.size();
  rec.decisions.assign(n, 0);
  rec.prices.reserve(n);
  rec.remaining.reserve(n);
  Vec b = inst.initial_budget();
  for (std::size_t k = 0; k < n; ++k) {
    rec.prices.push_back(price_at(k, b));
    const Order& o = inst.orders[k];
    if (lp::accept_decision(o, rec.prices.back(), b)) {
      rec.decisions[k] = 1;
      for (std::size_t i = 0; i < b.size(); ++i) b[i] -= o.a[i];
      rec.total_reward += o.u;
    }
    rec.remaining.push_back(b);
  }
  for (const Vec& r : rec.remaining)
    for (double v : r)
      if (v < 0.0) rec.feasible = false;
  return rec;
}

void check_instance(const Instance& inst) {
  if (inst.orders.size() != inst.n || inst.tilde_orders.size() != inst.n ||
      inst.d0.size() != inst.m)
    throw std::invalid_argument("policy: malformed instance");
}

}  // namespace

RunRecord run_resolve_single_sample(const Instance& inst) {
  check_instance(inst);
  lp::BreakpointWorkspace ws;
  const std::span<const Order> tilde(inst.tilde_orders);
  return simulate(inst, [&](std::size_t k, const Vec& b) {
    try {
      return lp::resolve_price(tilde.subspan(k), b, &ws);
    } catch (const lp::SolverError& e) {
      throw PolicyError(std::string(e.what()) + " (pivots " +
                            std::to_string(e.pivot_count()) + ")",
                        k);
    }
  });
}

RunRecord run_one_shot_single_sample(const Instance& inst) {
  check_instance(inst);
  Vec p;
  try {
    p = lp::resolve_price(inst.tilde_orders, inst.initial_budget());
  } catch (const lp::SolverError& e) {
    throw PolicyError(e.what(), 0);
  }
  return simulate(inst, [&](std::size_t, const Vec&) { return p; });
}

RunRecord run_fixed_price(const Instance& inst, const Vec& p) {
  check_instance(inst);
  if (p.size() != inst.m)
    throw std::invalid_argument("run_fixed_price: price length != m");
  for (double v : p)
    if (!(v >= 0.0)) throw std::invalid_argument("run_fixed_price: negative price");
  return simulate(inst, [&](std::size_t, const Vec&) { return p; });
}

RunRecord run_greedy_accept(const Instance& inst) {
  return run_fixed_price(inst, Vec(inst.m, 0.0));
}

RunRecord run_oracle_offline_price(const Instance& inst) {
  check_instance(inst);
  Vec p;
  try {
    p = lp::solve_offline_fractional(inst.orders, inst.initial_budget()).dual_price;
  } catch (const lp::SolverError& e) {
    throw PolicyError(e.what(), 0);
  }
  RunRecord rec = simulate(inst, [&](std::size_t, const Vec&) { return p; });
  rec.online = false;
  return rec;
}

RunRecord run_policy(const PolicySpec& spec, const Instance& inst) {
  switch (spec.kind) {
    case Kind::kResolveSingleSample: return run_resolve_single_sample(inst);
    case Kind::kOneShotSingleSample: return run_one_shot_single_sample(inst);
    case Kind::kFixedPrice: return run_fixed_price(inst, spec.price);
    case Kind::kGreedyAccept: return run_greedy_accept(inst);
    case Kind::kOracleOfflinePrice: return run_oracle_offline_price(inst);
  }
  throw std::invalid_argument("run_policy: unknown kind");
}

}  // namespace olp::policy
