#include "olp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "olp/lp.hpp"
#include "olp/parallel.hpp"
#include "olp/rng.hpp"

namespace olp::analysis {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double standard_error(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return sd / std::sqrt(static_cast<double>(xs.size()));
}

SimulationBatch simulate(const gen::GeneratorSpec& spec,
                         const policy::PolicySpec& policy, std::size_t n,
                         const Vec& d0, std::size_t reps, std::uint64_t seed,
                         bool keep_paths, std::size_t threads) {
  SimulationBatch batch;
  batch.spec = spec;
  batch.policy = policy;
  batch.n = n;
  batch.d0 = d0;
  batch.seed = seed;
  batch.outcomes.resize(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    const Instance inst = gen::sample_instance(spec, n, d0, seed, r);
    ReplicationOutcome& out = batch.outcomes[r];
    out.replication = r;
    out.seed_branch = Stream::derive_key(
        {seed, static_cast<std::uint64_t>(StreamTag::kInstance), r});
    try {
      out.offline_value =
          lp::solve_offline_fractional(inst.orders, inst.initial_budget()).value;
      const RunRecord rec = policy::run_policy(policy, inst);
      out.reward = rec.total_reward;
      if (keep_paths) {
        out.budgets.reserve(n);
        out.budgets.push_back(inst.initial_budget());
        for (std::size_t k = 0; k + 1 < n; ++k) out.budgets.push_back(rec.remaining[k]);
      }
    } catch (const policy::PolicyError& e) {
      throw ReplicationError(e.what(), n, r, e.step());
    } catch (const lp::SolverError& e) {
      throw ReplicationError(e.what(), n, r, std::nullopt);
    }
  });
  return batch;
}

RegretEstimate summarize_regret(const SimulationBatch& batch) {
  RegretEstimate est;
  est.n = batch.n;
  est.policy = batch.policy;
  est.reps = batch.outcomes.size();
  Vec regrets, offline, reward;
  for (const auto& o : batch.outcomes) {
    regrets.push_back(o.offline_value - o.reward);
    offline.push_back(o.offline_value);
    reward.push_back(o.reward);
  }
  est.mean_offline = mean(offline);
  est.mean_reward = mean(reward);
  est.mean_regret = est.mean_offline - est.mean_reward;
  est.stderr_regret = standard_error(regrets);
  est.replications = batch.outcomes;
  for (auto& o : est.replications) o.budgets.clear();
  return est;
}

RegretEstimate estimate_regret(const gen::GeneratorSpec& spec,
                               const policy::PolicySpec& policy, std::size_t n,
                               const Vec& d0, std::size_t reps,
                               std::uint64_t seed, std::size_t threads) {
  if (reps < 2) throw std::invalid_argument("estimate_regret: reps must be >= 2");
  return summarize_regret(simulate(spec, policy, n, d0, reps, seed, false, threads));
}

std::vector<DualConvergencePoint> dual_convergence_curve(
    const gen::GeneratorSpec& spec, std::span<const std::size_t> n_grid,
    const Vec& d0, std::size_t reps, std::uint64_t seed,
    std::span<const Vec> p_star_per_n, std::size_t threads) {
  if (p_star_per_n.size() != n_grid.size())
    throw std::invalid_argument("dual_convergence_curve: one p* per n required");
  std::vector<DualConvergencePoint> out;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const std::size_t n = n_grid[g];
    DualConvergencePoint pt;
    pt.n = n;
    pt.p_star = p_star_per_n[g];
    pt.sq_dists.assign(reps, 0.0);
    parallel_for(reps, threads, [&](std::size_t r) {
      std::vector<Order> path;
      path.reserve(n);
      for (std::size_t k = 0; k < n; ++k) {
        Stream stream(seed, StreamTag::kDualConvergence, r, n, k);
        path.push_back(gen::sample_order(spec, k, n, stream));
      }
      const Vec p = d0.size() == 1 ? lp::solve_dual_breakpoint(path, d0[0]).p
                                   : lp::solve_dual_simplex(path, d0).p;
      double s = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i)
        s += (p[i] - pt.p_star[i]) * (p[i] - pt.p_star[i]);
      pt.sq_dists[r] = s;
    });
    pt.mse = mean(pt.sq_dists);
    pt.stderr_mse = standard_error(pt.sq_dists);
    out.push_back(std::move(pt));
  }
  return out;
}

namespace {

double quantile_sorted(const Vec& xs, double q) {
  if (xs.empty()) return 0.0;
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return xs[lo] + w * (xs[hi] - xs[lo]);
}

}  // namespace

DeviationResult summarize_deviation(const SimulationBatch& batch,
                                    std::span<const Vec> delta, double eps_d,
                                    double alpha) {
  const std::size_t n = batch.n;
  if (delta.size() != n)
    throw std::invalid_argument("summarize_deviation: delta path length != n");
  DeviationResult res;
  res.stats.n = n;
  res.stats.eps_d = eps_d;
  res.stats.proxy_note =
      "exit when some b_k(i) < alpha or |d_k - delta_k|_2 > eps_d (ball proxy)";
  Vec margins;
  for (const auto& o : batch.outcomes) {
    if (o.budgets.size() != n)
      throw std::invalid_argument("summarize_deviation: batch lacks budget paths");
    Vec dev(n);
    std::size_t tau = n;
    for (std::size_t k = 0; k < n; ++k) {
      const double rest = static_cast<double>(n - k);
      double s = 0.0;
      bool low = false;
      for (std::size_t i = 0; i < o.budgets[k].size(); ++i) {
        const double diff = o.budgets[k][i] / rest - delta[k][i];
        s += diff * diff;
        if (o.budgets[k][i] < alpha) low = true;
      }
      dev[k] = std::sqrt(s);
      if (k >= 1 && tau == n && (low || dev[k] > eps_d)) tau = k;
    }
    res.exit_times.push_back(tau);
    margins.push_back(static_cast<double>(n - tau));
    res.deviations.push_back(std::move(dev));
  }
  res.stats.mean_exit_margin = mean(margins);
  res.stats.stderr_exit_margin = standard_error(margins);
  for (double mg : margins) {
    std::size_t bucket = 0;
    for (double edge = 1.0; mg >= edge; edge *= 2.0) ++bucket;
    if (res.stats.exit_histogram.size() <= bucket)
      res.stats.exit_histogram.resize(bucket + 1, 0);
    ++res.stats.exit_histogram[bucket];
  }
  res.quantiles.resize(n);
  Vec column(res.deviations.size());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t r = 0; r < res.deviations.size(); ++r)
      column[r] = res.deviations[r][k];
    std::sort(column.begin(), column.end());
    res.quantiles[k] = {quantile_sorted(column, 0.1), quantile_sorted(column, 0.5),
                        quantile_sorted(column, 0.9)};
  }
  return res;
}

DeviationResult state_deviation_paths(const gen::GeneratorSpec& spec,
                                      const policy::PolicySpec& policy,
                                      std::size_t n, const Vec& d0,
                                      std::size_t reps, double eps_d,
                                      std::uint64_t seed,
                                      std::span<const Vec> delta,
                                      std::size_t threads) {
  const SimulationBatch batch =
      simulate(spec, policy, n, d0, reps, seed, true, threads);
  return summarize_deviation(batch, delta, eps_d, spec.bounds().alpha);
}

std::string fit_model_name(FitModel m) {
  return m == FitModel::kPowerLaw ? "power_law_n" : "polylog";
}

FitResult fit_scaling(std::span<const ScalingPoint> points, FitModel model) {
  FitResult fit;
  fit.model = model;
  Vec xs, ys;
  std::size_t dropped = 0;
  for (const auto& p : points) {
    const double x = model == FitModel::kPowerLaw ? std::log(p.n)
                                                  : std::log(std::log(p.n));
    if (!(p.value > 0.0) || !std::isfinite(x)) {
      ++dropped;
      continue;
    }
    xs.push_back(x);
    ys.push_back(std::log(p.value));
    fit.grid.push_back(p.n);
  }
  if (dropped > 0)
    fit.note = std::to_string(dropped) + " non-positive point(s) excluded";
  if (xs.size() < 3)
    throw std::invalid_argument("fit_scaling: need at least 3 positive points");
  const double mx = mean(xs), my = mean(ys);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_scaling: degenerate grid");
  fit.exponent = sxy / sxx;
  fit.coefficient = std::exp(my - fit.exponent * mx);
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + fit.exponent * (xs[i] - mx));
    sse += r * r;
  }
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  return fit;
}

FitResult fit_scaling(std::span<const RegretEstimate> estimates, FitModel model) {
  std::vector<ScalingPoint> pts;
  for (const auto& e : estimates)
    pts.push_back({static_cast<double>(e.n), e.mean_regret});
  return fit_scaling(pts, model);
}

std::vector<ZFieldPoint> z_field_probe(const gen::GeneratorSpec& spec,
                                       std::size_t n, std::size_t k,
                                       std::span<const Vec> d_grid,
                                       std::size_t K, std::uint64_t seed,
                                       std::span<const Vec> delta,
                                       const std::optional<Vec>& fixed_price) {
  if (k + 1 >= n) throw std::invalid_argument("z_field_probe: need k + 1 < n");
  if (delta.size() != n) throw std::invalid_argument("z_field_probe: delta length != n");
  if (K == 0) throw std::invalid_argument("z_field_probe: K must be >= 1");
  const std::size_t m = spec.m;
  std::vector<ZFieldPoint> out;
  lp::BreakpointWorkspace ws;
  std::vector<Order> suffix;
  for (const Vec& d : d_grid) {
    if (d.size() != m) throw std::invalid_argument("z_field_probe: d length != m");
    for (double v : d)
      if (!(v > 0.0)) throw std::invalid_argument("z_field_probe: d must be > 0");
    std::vector<Vec> draws(m, Vec(K));
    for (std::size_t r = 0; r < K; ++r) {
      Vec b(m);
      for (std::size_t i = 0; i < m; ++i) b[i] = d[i] * static_cast<double>(n - k);
      Vec p;
      if (fixed_price) {
        p = *fixed_price;
      } else {
        suffix.clear();
        for (std::size_t i = k; i < n; ++i) {
          Stream stream(seed, StreamTag::kZProbe, r, 1, i);
          suffix.push_back(gen::sample_order(spec, i, n, stream));
        }
        p = lp::resolve_price(suffix, b, &ws);
      }
      Stream real(seed, StreamTag::kZProbe, r, 0, k);
      const Order o = gen::sample_order(spec, k, n, real);
      const bool x = lp::accept_decision(o, p, b);
      for (std::size_t i = 0; i < m; ++i) {
        const double next = (b[i] - (x ? o.a[i] : 0.0)) / static_cast<double>(n - k - 1);
        draws[i][r] = (next - delta[k + 1][i]) - (d[i] - delta[k][i]);
      }
    }
    ZFieldPoint pt;
    pt.d = d;
    for (std::size_t i = 0; i < m; ++i) {
      pt.mean_drift.push_back(mean(draws[i]));
      pt.stderr_drift.push_back(K >= 2 ? standard_error(draws[i]) : 0.0);
    }
    pt.drift_norm = norm2(pt.mean_drift);
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace olp::analysis
