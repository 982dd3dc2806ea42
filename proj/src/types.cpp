#include "olp/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace olp {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double min_entry(std::span<const double> x) {
  double lo = std::numeric_limits<double>::infinity();
  for (double v : x) lo = std::min(lo, v);
  return lo;
}

Vec Instance::initial_budget() const {
  Vec b(d0.size());
  for (std::size_t i = 0; i < d0.size(); ++i)
    b[i] = static_cast<double>(n) * d0[i];
  return b;
}

namespace {

void check_order(const Order& o, std::size_t m, double alpha, double u_bar,
                 const std::string& label, std::vector<std::string>& out) {
  if (!(o.u >= 0.0)) out.push_back(label + " reward negative");
  if (u_bar > 0.0 && o.u > u_bar) out.push_back(label + " reward above u_bar");
  if (o.a.size() != m) {
    out.push_back(label + " consumption length mismatch");
    return;
  }
  for (double v : o.a) {
    if (!(v >= 0.0) || (alpha > 0.0 && v > alpha)) {
      out.push_back(label + " consumption outside [0, alpha]");
      break;
    }
  }
}

}  // namespace

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> out;
  if (inst.n == 0) out.push_back("n not positive");
  if (inst.m == 0) out.push_back("m not positive");
  if (inst.d0.size() != inst.m) out.push_back("d0 length mismatch");
  for (std::size_t i = 0; i < inst.d0.size(); ++i) {
    if (!(inst.d0[i] > 0.0))
      out.push_back("d0 entry " + std::to_string(i) + " not positive");
  }
  if (inst.orders.size() != inst.n) out.push_back("orders length mismatch");
  if (inst.tilde_orders.size() != inst.orders.size())
    out.push_back("tilde length mismatch");
  for (std::size_t k = 0; k < inst.orders.size(); ++k)
    check_order(inst.orders[k], inst.m, inst.alpha, inst.u_bar,
                "order " + std::to_string(k), out);
  for (std::size_t k = 0; k < inst.tilde_orders.size(); ++k)
    check_order(inst.tilde_orders[k], inst.m, inst.alpha, inst.u_bar,
                "tilde order " + std::to_string(k), out);
  return out;
}

std::vector<std::string> validate_run_record(const RunRecord& record,
                                             const Instance& inst) {
  std::vector<std::string> out;
  const std::size_t n = inst.orders.size();
  if (record.decisions.size() != n || record.remaining.size() != n ||
      record.prices.size() != n) {
    out.push_back("record length mismatch");
    return out;
  }
  Vec b = inst.initial_budget();
  double reward = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Order& o = inst.orders[k];
    const bool x = record.decisions[k] != 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (x) b[i] -= o.a[i];
      if (record.remaining[k][i] != b[i]) {
        out.push_back("budget recurrence broken at step " + std::to_string(k));
        return out;
      }
      if (b[i] < 0.0) {
        out.push_back("negative remaining budget at step " + std::to_string(k));
        return out;
      }
    }
    if (x) reward += o.u;
  }
  if (std::abs(reward - record.total_reward) > 1e-12)
    out.push_back("total reward mismatch");
  if (!record.feasible) out.push_back("record flagged infeasible");
  return out;
}

Trajectory make_trajectory(const RunRecord& record, const Instance& inst,
                           const std::vector<Vec>* delta) {
  Trajectory tr;
  const std::size_t n = inst.n;
  tr.d_path.reserve(n);
  Vec b = inst.initial_budget();
  for (std::size_t k = 0; k < n; ++k) {
    const Vec& bk = k == 0 ? b : record.remaining[k - 1];
    Vec d(bk.size());
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = bk[i] / static_cast<double>(n - k);
    tr.d_path.push_back(std::move(d));
  }
  if (delta != nullptr) {
    tr.delta_ref = *delta;
    Vec dev(n);
    for (std::size_t k = 0; k < n; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < tr.d_path[k].size(); ++i) {
        const double diff = tr.d_path[k][i] - (*delta)[k][i];
        s += diff * diff;
      }
      dev[k] = std::sqrt(s);
    }
    tr.deviations = std::move(dev);
  }
  return tr;
}

}  // namespace olp
