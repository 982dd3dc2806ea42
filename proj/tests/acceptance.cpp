// Acceptance suite: one PASS/FAIL line per criterion.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "olp/analysis.hpp"
#include "olp/csv.hpp"
#include "olp/experiment.hpp"
#include "olp/generators.hpp"
#include "olp/lp.hpp"
#include "olp/rng.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
namespace an = olp::analysis;
namespace gen = olp::gen;
namespace lp = olp::lp;
namespace policy = olp::policy;
using olp::Order;
using olp::Stream;
using olp::StreamTag;
using olp::Vec;

namespace {

constexpr std::uint64_t kSeed = 20240611;
const std::vector<std::size_t> kGrid = {250, 500, 1000, 2000, 4000};
constexpr std::size_t kReps = 200;
constexpr double kEpsD = 0.1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::ostringstream os;
  os.precision(4);
  os << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << o.detail
     << " [" << secs << " s]";
  std::cout << os.str() << std::endl;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

double loglog_slope(const std::vector<double>& ns, const std::vector<double>& ys) {
  std::vector<an::ScalingPoint> pts;
  for (std::size_t i = 0; i < ns.size(); ++i) pts.push_back({ns[i], ys[i]});
  return an::fit_scaling(std::span<const an::ScalingPoint>(pts), an::FitModel::kPowerLaw)
      .exponent;
}

// Regret and exit-margin measurements for one family over the grid, from a
// single set of simulations.
struct ScalingRun {
  std::vector<an::RegretEstimate> regret;
  std::vector<double> exit_margin;
};

ScalingRun scaling_run(const gen::GeneratorSpec& spec) {
  ScalingRun out;
  const policy::PolicySpec resolve{policy::Kind::kResolveSingleSample, {}};
  const Vec d0{0.25};
  for (std::size_t n : kGrid) {
    const auto batch = an::simulate(spec, resolve, n, d0, kReps, kSeed, true);
    out.regret.push_back(an::summarize_regret(batch));
    const auto pp = gen::population_price(spec, n, 0, d0, 200, kSeed, 0);
    const auto delta = gen::delta_path(spec, n, d0, pp, 500, kSeed);
    const auto dev = an::summarize_deviation(batch, delta, kEpsD, spec.bounds().alpha);
    out.exit_margin.push_back(dev.stats.mean_exit_margin);
  }
  return out;
}

Outcome regret_scaling(const ScalingRun& run) {
  const auto fit = an::fit_scaling(std::span<const an::RegretEstimate>(run.regret),
                                   an::FitModel::kPowerLaw);
  const double ratio = run.regret[4].mean_regret / run.regret[1].mean_regret;
  std::string detail = "mean regret";
  for (const auto& e : run.regret)
    detail += " n=" + std::to_string(e.n) + ":" + fmt(e.mean_regret) + "+-" +
              fmt(e.stderr_regret);
  detail += "; exponent " + fmt(fit.exponent) + " (<= 0.5), ratio 4000/500 " + fmt(ratio) +
            " (<= 4)";
  return {fit.exponent <= 0.5 && ratio <= 4.0, detail};
}

Outcome state_tracking(const ScalingRun& run) {
  std::vector<double> ns(kGrid.begin(), kGrid.end());
  const double slope = loglog_slope(ns, run.exit_margin);
  std::string detail = "eps_d " + fmt(kEpsD) + ", mean n-tau";
  for (std::size_t i = 0; i < ns.size(); ++i)
    detail += " n=" + std::to_string(kGrid[i]) + ":" + fmt(run.exit_margin[i]);
  detail += "; slope " + fmt(slope) + " (<= 0.5)";
  return {slope <= 0.5, detail};
}

int run_lab(const std::string& args, const std::string& env) {
  const std::string cmd = env + " '" + std::string(OLP_LAB_EXE) + "' " + args + " > /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  report(1, "solver oracle equivalence", [] {
    Stream s(kSeed, StreamTag::kTest, 1, 0, 0);
    double worst_grid = 0.0, worst_simplex = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = 1 + s.below(50);
      const auto orders = oracle::random_orders(s, n, 1);
      const double d = 0.1 + 0.9 * s.uniform();
      double hi = 0.0;
      for (const auto& o : orders) hi = std::max(hi, o.u / o.a[0]);
      const auto bp = lp::solve_dual_breakpoint(orders, d);
      const auto grid = oracle::grid_dual_min(orders, d, 1e-4, hi + 0.1);
      const auto sx = lp::solve_dual_simplex(orders, Vec{d});
      worst_grid = std::max(worst_grid, std::abs(bp.objective - grid.value));
      worst_simplex = std::max(worst_simplex, std::abs(bp.objective - sx.objective));
    }
    return Outcome{worst_grid <= 1e-3 && worst_simplex <= 1e-8,
                   "max |breakpoint - grid| " + fmt(worst_grid) +
                       " (<= 1e-3), max |breakpoint - simplex| " + fmt(worst_simplex) +
                       " (<= 1e-8)"};
  });

  report(2, "strong duality", [] {
    Stream s(kSeed, StreamTag::kTest, 2, 0, 0);
    double worst_gap = 0.0, worst_slack = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 1 + s.below(50);
      const std::size_t m = 1 + s.below(3);
      const auto orders = oracle::random_orders(s, n, m, 0.0, 1.0);
      Vec b(m), d(m);
      for (std::size_t i = 0; i < m; ++i) {
        d[i] = 0.05 + 0.5 * s.uniform();
        b[i] = d[i] * static_cast<double>(n);
      }
      const auto sol = lp::solve_offline_fractional(orders, b);
      const double dual =
          static_cast<double>(n) * lp::dual_objective(sol.dual_price, orders, d);
      worst_gap = std::max(worst_gap, std::abs(sol.value - dual));
      for (std::size_t i = 0; i < m; ++i) {
        double used = 0.0;
        for (std::size_t k = 0; k < n; ++k) used += orders[k].a[i] * sol.x[k];
        worst_slack = std::max(worst_slack, used - b[i]);
      }
      for (double x : sol.x) worst_slack = std::max({worst_slack, -x, x - 1.0});
    }
    return Outcome{worst_gap <= 1e-8 && worst_slack <= 1e-9,
                   "max |primal - N dual| " + fmt(worst_gap) +
                       " (<= 1e-8), max constraint violation " + fmt(worst_slack) +
                       " (<= 1e-9)"};
  });

  report(3, "subgradient and convexity", [] {
    Stream s(kSeed, StreamTag::kTest, 3, 0, 0);
    auto random_vec = [&](std::size_t m, double scale) {
      Vec v(m);
      for (auto& x : v) x = scale * s.uniform();
      return v;
    };
    double worst_convex = -1e300, worst_sub = -1e300;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t m = 1 + s.below(3);
      const auto orders = oracle::random_orders(s, 1 + s.below(50), m, 0.0, 1.5);
      const Vec d = random_vec(m, 1.0), p1 = random_vec(m, 2.0), p2 = random_vec(m, 2.0);
      const double lam = s.uniform();
      Vec mix(m);
      for (std::size_t i = 0; i < m; ++i) mix[i] = lam * p1[i] + (1 - lam) * p2[i];
      worst_convex = std::max(worst_convex, lp::dual_objective(mix, orders, d) -
                                                lam * lp::dual_objective(p1, orders, d) -
                                                (1 - lam) * lp::dual_objective(p2, orders, d));
    }
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t m = 1 + s.below(3);
      const auto orders = oracle::random_orders(s, 1 + s.below(50), m, 0.0, 1.5);
      const Vec d = random_vec(m, 1.0), p = random_vec(m, 2.0), q = random_vec(m, 2.0);
      const Vec g = lp::dual_subgradient(p, orders, d);
      double lin = lp::dual_objective(p, orders, d);
      for (std::size_t i = 0; i < m; ++i) lin += g[i] * (q[i] - p[i]);
      worst_sub = std::max(worst_sub, lin - lp::dual_objective(q, orders, d));
    }
    return Outcome{worst_convex <= 1e-12 && worst_sub <= 1e-12,
                   "max convexity excess " + fmt(worst_convex) +
                       ", max subgradient excess " + fmt(worst_sub) + " (<= 1e-12)"};
  });

  const auto stationary = gen::stationary_uniform();
  const auto sinusoid = gen::sinusoidal(0.0, 0.8, 1.0);
  ScalingRun stationary_run, sinusoid_run;
  bool stationary_ok = false, sinusoid_ok = false;

  report(4, "regret scaling, stationary", [&] {
    stationary_run = scaling_run(stationary);
    stationary_ok = true;
    return regret_scaling(stationary_run);
  });

  report(5, "regret scaling, sinusoidal", [&] {
    const auto violations = gen::validate_generator(sinusoid);
    if (!violations.empty())
      return Outcome{false, "generator check failed: " + violations[0].detail};
    sinusoid_run = scaling_run(sinusoid);
    sinusoid_ok = true;
    auto o = regret_scaling(sinusoid_run);
    o.detail = "generator checks pass; " + o.detail;
    return o;
  });

  report(6, "two-phase separation", [] {
    const std::size_t n = 2000;
    const Vec d0{0.25};
    const auto greedy = an::estimate_regret(gen::two_phase_example1(true),
                                            {policy::Kind::kGreedyAccept, {}}, n, d0, kReps,
                                            kSeed);
    const auto p1 = an::estimate_regret(gen::two_phase_example1(false),
                                        {policy::Kind::kResolveSingleSample, {}}, n, d0,
                                        kReps, kSeed);
    const auto p2 = an::estimate_regret(gen::two_phase_example1(true),
                                        {policy::Kind::kResolveSingleSample, {}}, n, d0,
                                        kReps, kSeed);
    const double nn = static_cast<double>(n);
    return Outcome{greedy.mean_regret >= 0.3 * nn && p1.mean_regret <= 0.05 * nn &&
                       p2.mean_regret <= 0.05 * nn,
                   "greedy P2 " + fmt(greedy.mean_regret) + " (>= " + fmt(0.3 * nn) +
                       "), re-solve P1 " + fmt(p1.mean_regret) + ", P2 " +
                       fmt(p2.mean_regret) + " (<= " + fmt(0.05 * nn) + ")"};
  });

  report(7, "dual convergence", [] {
    std::vector<Vec> star(kGrid.size(), Vec{0.75});
    const auto curve =
        an::dual_convergence_curve(gen::stationary_uniform(), kGrid, {0.25}, 500, kSeed, star);
    const double mse500 = curve[1].mse, mse4000 = curve[4].mse;
    const double bound = mse500 * (500.0 / 4000.0) * (std::log(4000.0) / std::log(500.0)) * 4.0;
    std::string detail = "MSE";
    for (const auto& pt : curve) detail += " n=" + std::to_string(pt.n) + ":" + fmt(pt.mse);
    detail += "; MSE(4000) " + fmt(mse4000) + " <= " + fmt(bound);
    return Outcome{mse4000 <= bound, detail};
  });

  report(8, "state tracking", [&] {
    if (!stationary_ok || !sinusoid_ok)
      return Outcome{false, "scaling runs of criteria 4-5 unavailable"};
    const auto a = state_tracking(stationary_run);
    const auto b = state_tracking(sinusoid_run);
    return Outcome{a.pass && b.pass, "stationary: " + a.detail + "; sinusoidal: " + b.detail};
  });

  report(9, "determinism", [] {
    const fs::path dir = fs::temp_directory_path() / ("olp_acceptance_" + std::to_string(kSeed));
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string config = R"({
      "generator": {"family": "sinusoidal", "tilt_amplitude": 0.8},
      "policies": [{"kind": "resolve_single_sample"}, {"kind": "one_shot_single_sample"},
                   {"kind": "greedy_accept"}],
      "n_grid": [100, 200, 400], "reps": 16, "d0": [0.25], "seed": 5,
      "outputs": ")" + (dir / "a").string() + R"(",
      "analysis": {"regret": true, "dual_convergence": true, "state_deviation": true,
                   "fit": true},
      "population": {"K": 50, "K_delta": 50, "bootstrap": 5}
    })";
    olp::csv::write_file(dir / "c.json", config);
    const std::string cfg = "'" + (dir / "c.json").string() + "'";
    int codes = run_lab("run " + cfg, "OLP_LAB_THREADS=1");
    codes += run_lab("run " + cfg + " --out '" + (dir / "b").string() + "'", "OLP_LAB_THREADS=1");
    codes += run_lab("run " + cfg + " --out '" + (dir / "c").string() + "'", "OLP_LAB_THREADS=4");
    codes += run_lab("--threads 7 run " + cfg + " --out '" + (dir / "d").string() + "'", "");
    if (codes != 0) return Outcome{false, "olp-lab run failed"};
    std::size_t files = 0, mismatched = 0;
    for (const auto& entry : fs::directory_iterator(dir / "a")) {
      const auto bytes = olp::csv::read_file(entry.path());
      for (const char* other : {"b", "c", "d"})
        if (olp::csv::read_file(dir / other / entry.path().filename()) != bytes) ++mismatched;
      ++files;
    }
    fs::remove_all(dir);
    return Outcome{files >= 10 && mismatched == 0,
                   std::to_string(files) + " files compared across 4 runs (1, 1, 4, 7 threads), " +
                       std::to_string(mismatched) + " mismatches"};
  });

  report(10, "oracle policy bound", [] {
    const std::vector<std::pair<std::string, gen::GeneratorSpec>> families = {
        {"stationary_uniform", gen::stationary_uniform()},
        {"stationary_uniform box m=2",
         gen::stationary_uniform(1.0, gen::box_consumption({0.2, 0.4}, {0.8, 1.0}))},
        {"linear_drift", gen::linear_drift(-0.6, 0.6)},
        {"sinusoidal", gen::sinusoidal(0.0, 0.8)},
        {"sinusoidal box m=3",
         gen::sinusoidal(0.1, 0.6, 2.0, 2.0,
                         gen::box_consumption({0.1, 0.3, 0.5}, {0.9, 1.0, 1.5}))},
        {"two_phase_example1 P1", gen::two_phase_example1(false)},
        {"two_phase_example1 P2", gen::two_phase_example1(true)},
        {"custom_table", gen::custom_table({0.0, 0.3, 1.0}, {-0.5, 0.7, 0.0})}};
    bool ok = true;
    std::string detail = "worst regret / (m u_bar):";
    for (const auto& [name, spec] : families) {
      const Vec d0(spec.m, 0.25);
      const auto est = an::estimate_regret(spec, {policy::Kind::kOracleOfflinePrice, {}}, 500,
                                           d0, kReps, kSeed);
      const double cap = static_cast<double>(spec.m) * spec.bounds().u_bar;
      double worst = 0.0;
      for (const auto& r : est.replications)
        worst = std::max(worst, r.offline_value - r.reward);
      ok = ok && worst <= cap;
      detail += " " + name + " " + fmt(worst / cap);
    }
    return Outcome{ok, detail};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
