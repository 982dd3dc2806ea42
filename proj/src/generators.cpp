#include "olp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "olp/lp.hpp"

namespace olp::gen {

std::string family_name(Family f) {
  switch (f) {
    case Family::kStationaryUniform: return "stationary_uniform";
    case Family::kLinearDrift: return "linear_drift";
    case Family::kSinusoidal: return "sinusoidal";
    case Family::kTwoPhaseExample1: return "two_phase_example1";
    case Family::kCustomTable: return "custom_table";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::kStationaryUniform, Family::kLinearDrift,
                   Family::kSinusoidal, Family::kTwoPhaseExample1,
                   Family::kCustomTable})
    if (family_name(f) == name) return f;
  throw std::invalid_argument("unknown generator family '" + name + "'");
}

std::string violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::kDensityLowerBound: return "density_lower_bound";
    case ViolationKind::kDensityUpperBound: return "density_upper_bound";
    case ViolationKind::kNormalization: return "normalization";
    case ViolationKind::kSupport: return "support";
    case ViolationKind::kSmoothness: return "smoothness";
  }
  return "unknown";
}

Consumption box_consumption(Vec lo, Vec hi) {
  Consumption c;
  c.kind = Consumption::Kind::kBox;
  c.value.clear();
  c.lo = std::move(lo);
  c.hi = std::move(hi);
  return c;
}

Consumption constant_consumption(Vec value) {
  Consumption c;
  c.value = std::move(value);
  return c;
}

namespace {

std::size_t consumption_dim(const Consumption& c) {
  return c.kind == Consumption::Kind::kConstant ? c.value.size() : c.lo.size();
}

GeneratorSpec with_consumption(Family f, Consumption c, double u_max) {
  GeneratorSpec s;
  s.family = f;
  s.params.u_max = u_max;
  s.m = consumption_dim(c);
  s.params.consumption = std::move(c);
  return s;
}

// Tilt schedule and its derivative for the smooth families.
double tilt_at(const GeneratorSpec& spec, double t) {
  const auto& p = spec.params;
  switch (spec.family) {
    case Family::kStationaryUniform:
    case Family::kTwoPhaseExample1:
      return 0.0;
    case Family::kLinearDrift:
      return p.tilt_start + (p.tilt_end - p.tilt_start) * t;
    case Family::kSinusoidal:
      return p.tilt_mean +
             p.tilt_amplitude * std::sin(2.0 * std::numbers::pi * p.cycles * t);
    case Family::kCustomTable: {
      const Vec& xs = p.table_t;
      const Vec& ys = p.table_tilt;
      if (t <= xs.front()) return ys.front();
      if (t >= xs.back()) return ys.back();
      const auto it = std::upper_bound(xs.begin(), xs.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - xs.begin());
      const double w = (t - xs[i - 1]) / (xs[i] - xs[i - 1]);
      return ys[i - 1] + w * (ys[i] - ys[i - 1]);
    }
  }
  return 0.0;
}

double max_abs_tilt(const GeneratorSpec& spec) {
  const auto& p = spec.params;
  switch (spec.family) {
    case Family::kStationaryUniform:
    case Family::kTwoPhaseExample1:
      return 0.0;
    case Family::kLinearDrift:
      return std::max(std::abs(p.tilt_start), std::abs(p.tilt_end));
    case Family::kSinusoidal:
      return std::abs(p.tilt_mean) + std::abs(p.tilt_amplitude);
    case Family::kCustomTable: {
      double s = 0.0;
      for (double v : p.table_tilt) s = std::max(s, std::abs(v));
      return s;
    }
  }
  return 0.0;
}

double max_abs_tilt_rate(const GeneratorSpec& spec) {
  const auto& p = spec.params;
  switch (spec.family) {
    case Family::kStationaryUniform:
    case Family::kTwoPhaseExample1:
      return 0.0;
    case Family::kLinearDrift:
      return std::abs(p.tilt_end - p.tilt_start);
    case Family::kSinusoidal:
      return 2.0 * std::numbers::pi * std::abs(p.cycles * p.tilt_amplitude);
    case Family::kCustomTable: {
      double r = 0.0;
      for (std::size_t i = 1; i < p.table_t.size(); ++i)
        r = std::max(r, std::abs((p.table_tilt[i] - p.table_tilt[i - 1]) /
                                 (p.table_t[i] - p.table_t[i - 1])));
      return r;
    }
  }
  return 0.0;
}

double consumption_density(const Consumption& c) {
  if (c.kind == Consumption::Kind::kConstant) return 1.0;  // point mass
  double vol = 1.0;
  for (std::size_t i = 0; i < c.lo.size(); ++i) vol *= c.hi[i] - c.lo[i];
  return 1.0 / vol;
}

bool in_consumption_support(const Consumption& c, std::span<const double> a) {
  const std::size_t m = consumption_dim(c);
  if (a.size() != m) return false;
  for (std::size_t i = 0; i < m; ++i) {
    if (c.kind == Consumption::Kind::kConstant) {
      if (a[i] != c.value[i]) return false;
    } else if (a[i] < c.lo[i] || a[i] > c.hi[i]) {
      return false;
    }
  }
  return true;
}

void check_spec(const GeneratorSpec& spec) {
  const auto& c = spec.params.consumption;
  if (spec.m == 0) throw std::invalid_argument("generator: m must be >= 1");
  if (consumption_dim(c) != spec.m)
    throw std::invalid_argument("generator: consumption dimension != m");
  if (c.kind == Consumption::Kind::kBox) {
    if (c.hi.size() != c.lo.size())
      throw std::invalid_argument("generator: box lo/hi length mismatch");
    for (std::size_t i = 0; i < c.lo.size(); ++i)
      if (!(c.lo[i] >= 0.0 && c.hi[i] > c.lo[i]))
        throw std::invalid_argument("generator: box needs 0 <= lo < hi");
  } else {
    for (double v : c.value)
      if (!(v >= 0.0))
        throw std::invalid_argument("generator: consumption must be >= 0");
  }
  if (!(spec.params.u_max > 0.0))
    throw std::invalid_argument("generator: u_max must be positive");
  if (max_abs_tilt(spec) > 1.0)
    throw std::invalid_argument("generator: |tilt| must stay <= 1");
  if (spec.family == Family::kCustomTable) {
    const auto& p = spec.params;
    if (p.table_t.size() < 2 || p.table_t.size() != p.table_tilt.size())
      throw std::invalid_argument("custom_table: need >= 2 matching knots");
    for (std::size_t i = 1; i < p.table_t.size(); ++i)
      if (!(p.table_t[i] > p.table_t[i - 1]))
        throw std::invalid_argument("custom_table: knots must increase");
  }
  if (spec.family == Family::kTwoPhaseExample1 && spec.m != 1)
    throw std::invalid_argument("two_phase_example1: m must be 1");
}

}  // namespace

GeneratorSpec stationary_uniform(double u_max, Consumption c) {
  return with_consumption(Family::kStationaryUniform, std::move(c), u_max);
}

GeneratorSpec linear_drift(double tilt_start, double tilt_end, double u_max,
                           Consumption c) {
  GeneratorSpec s = with_consumption(Family::kLinearDrift, std::move(c), u_max);
  s.params.tilt_start = tilt_start;
  s.params.tilt_end = tilt_end;
  return s;
}

GeneratorSpec sinusoidal(double tilt_mean, double tilt_amplitude, double cycles,
                         double u_max, Consumption c) {
  GeneratorSpec s = with_consumption(Family::kSinusoidal, std::move(c), u_max);
  s.params.tilt_mean = tilt_mean;
  s.params.tilt_amplitude = tilt_amplitude;
  s.params.cycles = cycles;
  return s;
}

GeneratorSpec two_phase_example1(bool shifted) {
  GeneratorSpec s =
      with_consumption(Family::kTwoPhaseExample1, Consumption{}, 3.0);
  s.params.shifted = shifted;
  return s;
}

GeneratorSpec custom_table(Vec knots, Vec tilts, double u_max, Consumption c) {
  GeneratorSpec s = with_consumption(Family::kCustomTable, std::move(c), u_max);
  s.params.table_t = std::move(knots);
  s.params.table_tilt = std::move(tilts);
  return s;
}

Bounds GeneratorSpec::bounds() const {
  Bounds b;
  const auto& c = params.consumption;
  if (c.kind == Consumption::Kind::kConstant) {
    for (double v : c.value) b.alpha = std::max(b.alpha, v);
  } else {
    for (double v : c.hi) b.alpha = std::max(b.alpha, v);
  }
  b.u_bar = params.u_max;
  const double v_density = consumption_density(c);
  if (family == Family::kTwoPhaseExample1) {
    // Both phases are unit-width uniforms; the class bound is u_bar = 3.
    b.mu_lo = 1.0;
    b.mu_hi = std::max(1.0, v_density);
    b.lipschitz = 0.0;
  } else {
    const double s = max_abs_tilt(*this);
    const double w = params.u_max;
    b.mu_lo = (1.0 - s) / w;
    b.mu_hi = std::max((1.0 + s) / w, v_density);
    b.lipschitz = std::hypot(2.0 * s / (w * w), max_abs_tilt_rate(*this) / w);
  }
  if (declared.alpha >= 0.0) b.alpha = declared.alpha;
  if (declared.u_bar >= 0.0) b.u_bar = declared.u_bar;
  if (declared.mu_lo >= 0.0) b.mu_lo = declared.mu_lo;
  if (declared.mu_hi >= 0.0) b.mu_hi = declared.mu_hi;
  if (declared.lipschitz >= 0.0) b.lipschitz = declared.lipschitz;
  return b;
}

double RewardLaw::density(double u) const {
  if (u < lo || u > hi) return 0.0;
  const double w = hi - lo;
  return (1.0 + tilt * (2.0 * (u - lo) / w - 1.0)) / w;
}

double RewardLaw::quantile(double q) const {
  // CDF on the unit scale: F(x) = s x^2 + (1 - s) x.
  const double s = tilt;
  const double x = 2.0 * q / ((1.0 - s) + std::sqrt((1.0 - s) * (1.0 - s) + 4.0 * s * q));
  return lo + (hi - lo) * std::clamp(x, 0.0, 1.0);
}

double RewardLaw::survival(double u) const {
  if (u < lo) return 1.0;
  if (u >= hi) return 0.0;
  const double x = (u - lo) / (hi - lo);
  return 1.0 - (tilt * x * x + (1.0 - tilt) * x);
}

RewardLaw reward_law_at_time(const GeneratorSpec& spec, double t) {
  if (spec.family == Family::kTwoPhaseExample1) {
    if (t <= 0.5 || !spec.params.shifted) return {0.0, 1.0, 0.0};
    return {2.0, 3.0, 0.0};
  }
  return {0.0, spec.params.u_max, tilt_at(spec, t)};
}

RewardLaw reward_law_at_index(const GeneratorSpec& spec, std::size_t index,
                              std::size_t n) {
  if (spec.family == Family::kTwoPhaseExample1) {
    const std::size_t first_phase = (n + 1) / 2;  // ceil(n / 2)
    if (index + 1 <= first_phase || !spec.params.shifted) return {0.0, 1.0, 0.0};
    return {2.0, 3.0, 0.0};
  }
  return reward_law_at_time(spec, arrival_time(index, n));
}

Order order_from_uniforms(const GeneratorSpec& spec, std::size_t index,
                          std::size_t n, std::span<const double> uniforms) {
  const auto& c = spec.params.consumption;
  Order o;
  if (c.kind == Consumption::Kind::kConstant) {
    o.a = c.value;
  } else {
    o.a.resize(spec.m);
    for (std::size_t i = 0; i < spec.m; ++i)
      o.a[i] = c.lo[i] + (c.hi[i] - c.lo[i]) * uniforms[i];
  }
  o.u = reward_law_at_index(spec, index, n).quantile(uniforms[spec.m]);
  return o;
}

Order sample_order(const GeneratorSpec& spec, std::size_t index, std::size_t n,
                   Stream& stream) {
  if (index >= n) throw std::invalid_argument("sample_order: index >= n");
  double buf[16];
  std::vector<double> heap;
  double* q = buf;
  if (spec.m + 1 > 16) {
    heap.resize(spec.m + 1);
    q = heap.data();
  }
  for (std::size_t i = 0; i <= spec.m; ++i) q[i] = stream.uniform();
  return order_from_uniforms(spec, index, n, {q, spec.m + 1});
}

Instance sample_instance(const GeneratorSpec& spec, std::size_t n, const Vec& d0,
                         std::uint64_t seed, std::uint64_t replication) {
  if (n == 0) throw std::invalid_argument("sample_instance: n must be >= 1");
  check_spec(spec);
  Instance inst;
  inst.n = n;
  inst.m = spec.m;
  inst.d0 = d0;
  inst.seed_info = {seed, replication, 0, 1};
  const Bounds b = spec.bounds();
  inst.alpha = b.alpha;
  inst.u_bar = b.u_bar;
  inst.orders.reserve(n);
  inst.tilde_orders.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Stream real(seed, StreamTag::kInstance, replication, 0, k);
    Stream tilde(seed, StreamTag::kInstance, replication, 1, k);
    inst.orders.push_back(sample_order(spec, k, n, real));
    inst.tilde_orders.push_back(sample_order(spec, k, n, tilde));
  }
  return inst;
}

double density_v(const GeneratorSpec& spec, double t, std::span<const double> a) {
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("density_v: t outside [0,1]");
  const auto& c = spec.params.consumption;
  if (!in_consumption_support(c, a)) return 0.0;
  return consumption_density(c);
}

double density_f(const GeneratorSpec& spec, double t, std::span<const double> a,
                 double u) {
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("density_f: t outside [0,1]");
  if (!in_consumption_support(spec.params.consumption, a)) return 0.0;
  return reward_law_at_time(spec, t).density(u);
}

namespace {

// Grid of consumption vectors inside the support.
std::vector<Vec> consumption_grid(const Consumption& c, std::size_t per_axis) {
  if (c.kind == Consumption::Kind::kConstant) return {c.value};
  const std::size_t m = c.lo.size();
  const std::size_t g = std::max<std::size_t>(per_axis, 2);
  std::size_t total = 1;
  for (std::size_t i = 0; i < m && total <= 4096; ++i) total *= g;
  std::vector<Vec> out;
  if (total > 4096) {
    // Corners are too many; use the diagonal.
    for (std::size_t k = 0; k < g; ++k) {
      Vec a(m);
      for (std::size_t i = 0; i < m; ++i)
        a[i] = c.lo[i] + (c.hi[i] - c.lo[i]) * static_cast<double>(k) / (g - 1);
      out.push_back(std::move(a));
    }
    return out;
  }
  for (std::size_t idx = 0; idx < total; ++idx) {
    Vec a(m);
    std::size_t r = idx;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t k = r % g;
      r /= g;
      a[i] = c.lo[i] + (c.hi[i] - c.lo[i]) * static_cast<double>(k) / (g - 1);
    }
    out.push_back(std::move(a));
  }
  return out;
}

struct Worst {
  double excess = 0.0;
  std::string detail;
  bool hit = false;

  void offer(double e, const std::string& what) {
    if (e > 0.0 && (!hit || e > excess)) {
      excess = e;
      detail = what;
      hit = true;
    }
  }
};

std::string at_point(double t, double u) {
  std::ostringstream os;
  os << "t=" << t << " u=" << u;
  return os.str();
}

}  // namespace

std::vector<Violation> validate_generator(const GeneratorSpec& spec,
                                          const GridSizes& grid) {
  check_spec(spec);
  const Bounds b = spec.bounds();
  const auto& c = spec.params.consumption;
  Worst lower, upper, norm, support, smooth;

  if (!(b.mu_lo > 0.0)) lower.offer(1.0, "declared mu_lo is not positive");
  if (!(b.alpha > 0.0)) support.offer(1.0, "declared alpha is not positive");

  const std::size_t gt = std::max<std::size_t>(grid.t, 2);
  const std::size_t gu = std::max<std::size_t>(grid.u, 3);
  const double ht = 1.0 / static_cast<double>(gt - 1);
  const double tol = 1e-9;
  const auto a_grid = consumption_grid(c, grid.a);

  // Consumption density bounds and normalization.
  for (const Vec& a : a_grid) {
    const double v = density_v(spec, 0.5, a);
    if (!(v > 0.0)) lower.offer(1.0, "consumption density vanishes on support");
    upper.offer(v - b.mu_hi - tol, "consumption density above mu_hi");
    for (double x : a)
      if (x < 0.0 || x > b.alpha) support.offer(x, "consumption outside [0, alpha]");
  }
  if (c.kind == Consumption::Kind::kBox && c.lo.size() <= 3) {
    // Midpoint rule over the box.
    const std::size_t g = 20;
    const std::size_t dim = c.lo.size();
    std::size_t total = 1;
    double cell = 1.0;
    for (std::size_t i = 0; i < dim; ++i) {
      total *= g;
      cell *= (c.hi[i] - c.lo[i]) / g;
    }
    double mass = 0.0;
    Vec a(dim);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t r = idx;
      for (std::size_t i = 0; i < dim; ++i) {
        a[i] = c.lo[i] + (static_cast<double>(r % g) + 0.5) * (c.hi[i] - c.lo[i]) / g;
        r /= g;
      }
      mass += density_v(spec, 0.5, a) * cell;
    }
    norm.offer(std::abs(mass - 1.0) - 1e-6,
               "consumption density integrates to " + std::to_string(mass));
  }

  for (std::size_t it = 0; it < gt; ++it) {
    const double t = static_cast<double>(it) * ht;
    for (const Vec& a : a_grid) {
      const RewardLaw law = reward_law_at_time(spec, t);
      if (law.lo < 0.0 || law.hi > b.u_bar + tol)
        support.offer(std::max(-law.lo, law.hi - b.u_bar),
                      "reward support outside [0, u_bar] at t=" + std::to_string(t));
      const double w = law.hi - law.lo;
      const double hu = w / static_cast<double>(gu - 1);

      // Simpson's rule on the support.
      double integral = 0.0;
      const std::size_t intervals = 2 * ((gu + 1) / 2);
      const double hs = w / static_cast<double>(intervals);
      for (std::size_t k = 0; k <= intervals; ++k) {
        const double u = law.lo + hs * static_cast<double>(k);
        const double wt = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        integral += wt * density_f(spec, t, a, u);
      }
      integral *= hs / 3.0;
      norm.offer(std::abs(integral - 1.0) - 1e-6,
                 "reward density integrates to " + std::to_string(integral) +
                     " at t=" + std::to_string(t));

      for (std::size_t iu = 0; iu < gu; ++iu) {
        const double u = law.lo + hu * static_cast<double>(iu);
        const double f = density_f(spec, t, a, u);
        lower.offer(b.mu_lo - f - tol, "f below mu_lo at " + at_point(t, u));
        upper.offer(f - b.mu_hi - tol, "f above mu_hi at " + at_point(t, u));

        // Finite-difference gradient; u-differences stay inside the support,
        // t-differences use the raw density so jumps in time are caught.
        double du = 0.0;
        if (iu > 0 && iu + 1 < gu)
          du = (density_f(spec, t, a, u + hu) - density_f(spec, t, a, u - hu)) /
               (2.0 * hu);
        double dt = 0.0;
        if (it + 1 < gt)
          dt = (density_f(spec, t + ht, a, u) - f) / ht;
        const double g = std::hypot(du, dt);
        smooth.offer(g - b.lipschitz * (1.0 + 1e-6) - tol,
                     "gradient " + std::to_string(g) + " exceeds L=" +
                         std::to_string(b.lipschitz) + " at " + at_point(t, u));
      }

      // Drawn orders stay in the declared support.
      Stream stream(0, StreamTag::kValidation, it, 0, 0);
      for (int s = 0; s < 8; ++s) {
        const double u = law.quantile(stream.uniform());
        if (u < 0.0 || u > b.u_bar)
          support.offer(std::max(-u, u - b.u_bar), "sampled reward outside [0, u_bar]");
      }
    }
  }

  std::vector<Violation> out;
  auto emit = [&](const Worst& w, ViolationKind k) {
    if (w.hit) out.push_back({k, w.detail});
  };
  emit(lower, ViolationKind::kDensityLowerBound);
  emit(upper, ViolationKind::kDensityUpperBound);
  emit(norm, ViolationKind::kNormalization);
  emit(support, ViolationKind::kSupport);
  emit(smooth, ViolationKind::kSmoothness);
  return out;
}

namespace {

// K Latin-hypercube draws for one order index: every coordinate's K
// uniforms hit each of the K strata exactly once.
void stratified_orders(const GeneratorSpec& spec, std::size_t index,
                       std::size_t n, std::size_t K, std::uint64_t seed,
                       StreamTag tag, std::vector<Order>& out) {
  const std::size_t dims = spec.m + 1;
  std::vector<double> q(dims * K);
  std::vector<std::size_t> perm(K);
  for (std::size_t dim = 0; dim < dims; ++dim) {
    Stream stream(seed, tag, n, dim, index);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = K; i > 1; --i)
      std::swap(perm[i - 1], perm[stream.below(i)]);
    for (std::size_t r = 0; r < K; ++r)
      q[r * dims + dim] =
          (static_cast<double>(perm[r]) + stream.uniform()) / static_cast<double>(K);
  }
  for (std::size_t r = 0; r < K; ++r)
    out.push_back(order_from_uniforms(spec, index, n, {&q[r * dims], dims}));
}

Vec solve_pool(std::span<const Order> pool, const Vec& d) {
  if (d.size() == 1) return lp::solve_dual_breakpoint(pool, d[0]).p;
  return lp::solve_dual_simplex(pool, d).p;
}

}  // namespace

PopulationPrice population_price(const GeneratorSpec& spec, std::size_t n,
                                 std::size_t start, const Vec& d, std::size_t K,
                                 std::uint64_t seed, std::size_t bootstrap) {
  check_spec(spec);
  if (K == 0) throw std::invalid_argument("population_price: K must be >= 1");
  if (start >= n) throw std::invalid_argument("population_price: start >= n");
  if (d.size() != spec.m)
    throw std::invalid_argument("population_price: d length != m");
  for (double v : d)
    if (!(v > 0.0)) throw std::invalid_argument("population_price: d must be > 0");

  std::vector<Order> pool;
  pool.reserve(K * (n - start));
  for (std::size_t k = start; k < n; ++k)
    stratified_orders(spec, k, n, K, seed, StreamTag::kPopulation, pool);

  PopulationPrice out;
  out.n = n;
  out.start = start;
  out.d = d;
  out.K = K;
  out.p_star = solve_pool(pool, d);
  out.bootstrap_sd.assign(spec.m, 0.0);

  if (bootstrap >= 2) {
    std::vector<Vec> draws;
    std::vector<Order> resample(pool.size());
    for (std::size_t r = 0; r < bootstrap; ++r) {
      Stream stream(seed, StreamTag::kBootstrap, r, 0, start);
      for (auto& o : resample) o = pool[stream.below(pool.size())];
      draws.push_back(solve_pool(resample, d));
    }
    for (std::size_t i = 0; i < spec.m; ++i) {
      double mean = 0.0;
      for (const Vec& p : draws) mean += p[i];
      mean /= static_cast<double>(draws.size());
      double ss = 0.0;
      for (const Vec& p : draws) ss += (p[i] - mean) * (p[i] - mean);
      out.bootstrap_sd[i] = std::sqrt(ss / static_cast<double>(draws.size() - 1));
    }
    std::ostringstream os;
    os << "bootstrap sd over " << bootstrap << " resamples: max "
       << *std::max_element(out.bootstrap_sd.begin(), out.bootstrap_sd.end());
    out.stderr_note = os.str();
  } else {
    out.stderr_note = "bootstrap disabled";
  }
  return out;
}

std::vector<Vec> delta_path(const GeneratorSpec& spec, std::size_t n,
                            const Vec& d0, const PopulationPrice& p_star,
                            std::size_t K, std::uint64_t seed) {
  check_spec(spec);
  if (K == 0) throw std::invalid_argument("delta_path: K must be >= 1");
  if (d0.size() != spec.m || p_star.p_star.size() != spec.m)
    throw std::invalid_argument("delta_path: dimension mismatch");
  std::vector<Vec> path(n, Vec(spec.m));
  Vec consumed(spec.m, 0.0);
  std::vector<Order> draws;
  draws.reserve(K);
  const double dn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < spec.m; ++i)
      path[k][i] = k == 0 ? d0[i]
                          : (dn * d0[i] - consumed[i]) / static_cast<double>(n - k);
    draws.clear();
    stratified_orders(spec, k, n, K, seed, StreamTag::kDeltaPath, draws);
    Vec mean(spec.m, 0.0);
    for (const Order& o : draws)
      if (o.u > dot(o.a, p_star.p_star))
        for (std::size_t i = 0; i < spec.m; ++i) mean[i] += o.a[i];
    for (std::size_t i = 0; i < spec.m; ++i)
      consumed[i] += mean[i] / static_cast<double>(K);
  }
  return path;
}

NondegeneracyEstimate nondegeneracy(const GeneratorSpec& spec,
                                    std::span<const double> p_star) {
  const auto& c = spec.params.consumption;
  NondegeneracyEstimate e;
  if (c.kind == Consumption::Kind::kConstant) {
    e.inf_ap = e.sup_ap = dot(c.value, p_star);
  } else {
    // p* >= 0, so the extremes sit at the lo and hi corners.
    e.inf_ap = dot(c.lo, p_star);
    e.sup_ap = dot(c.hi, p_star);
  }
  e.u_bar = spec.bounds().u_bar;
  e.margin = std::min(e.inf_ap, e.u_bar - e.sup_ap);
  return e;
}

double expected_top_k_uniform(std::size_t k, std::size_t n) {
  if (k > n) k = n;
  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  return kk * (2.0 * nn - kk + 1.0) / (2.0 * (nn + 1.0));
}

namespace {

// Expected fractional top-b sum of n iid Uniform(0,1) for real b in [0, n].
double expected_fractional_top(double b, std::size_t n) {
  if (b >= static_cast<double>(n)) return static_cast<double>(n) / 2.0;
  const auto k = static_cast<std::size_t>(std::floor(b));
  const double frac = b - static_cast<double>(k);
  const double base = expected_top_k_uniform(k, n);
  return base + frac * (expected_top_k_uniform(k + 1, n) - base);
}

}  // namespace

double example1_expected_offline(std::size_t n, bool shifted, double d0) {
  const double b = static_cast<double>(n) * d0;
  if (!shifted) return expected_fractional_top(b, n);
  const std::size_t first = (n + 1) / 2;
  const std::size_t second = n - first;
  if (b <= static_cast<double>(second))
    return 2.0 * b + expected_fractional_top(b, second);
  return 2.5 * static_cast<double>(second) +
         expected_fractional_top(b - static_cast<double>(second), first);
}

}  // namespace olp::gen
