#include "olp/simplex.hpp"

#include <algorithm>
#include <cmath>

namespace olp::lp {
namespace {

class BoundedSimplex {
 public:
  BoundedSimplex(const BoundedLp& lp, const SimplexOptions& opt)
      : lp_(lp),
        opt_(opt),
        rows_(lp.rows),
        cols_(lp.cols),
        total_(lp.rows + lp.cols),
        basis_(rows_),
        row_of_(total_, -1),
        at_upper_(total_, 0),
        value_(total_, 0.0),
        binv_(rows_ * rows_, 0.0),
        reduced_(total_, 0.0),
        pi_(rows_, 0.0),
        column_(rows_, 0.0) {
    for (std::size_t r = 0; r < rows_; ++r) {
      basis_[r] = cols_ + r;
      row_of_[cols_ + r] = static_cast<long>(r);
      value_[cols_ + r] = lp.b[r];
      binv_[r * rows_ + r] = 1.0;
    }
    bland_after_ = opt.bland_after ? opt.bland_after : 2 * total_;
    max_iterations_ = 50 * total_ + 1000;
  }

  SimplexResult run() {
    SimplexResult res;
    for (;;) {
      if (iterations_ >= max_iterations_)
        throw SolverError("simplex iteration limit reached", pivots_);
      compute_duals();
      compute_reduced_costs();
      const long entering = choose_entering();
      if (entering < 0) break;
      ++iterations_;
      if (!step(static_cast<std::size_t>(entering))) {
        res.status = SimplexStatus::kUnbounded;
        break;
      }
    }
    refactor();
    compute_duals();

    res.iterations = iterations_;
    res.pivots = pivots_;
    res.x.assign(cols_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) {
      res.x[j] = std::clamp(value_[j], 0.0, upper(j));
      res.value += lp_.c[j] * res.x[j];
      if (row_of_[j] >= 0) ++res.basic_structurals;
    }
    res.duals.resize(rows_);
    for (std::size_t r = 0; r < rows_; ++r) res.duals[r] = std::max(0.0, pi_[r]);
    return res;
  }

 private:
  double cost(std::size_t j) const { return j < cols_ ? lp_.c[j] : 0.0; }
  double upper(std::size_t j) const {
    return j < cols_ ? lp_.upper[j] : kInfinity;
  }
  double entry(std::size_t r, std::size_t j) const {
    if (j < cols_) return lp_.at(r, j);
    return (j - cols_) == r ? 1.0 : 0.0;
  }

  void compute_duals() {
    std::fill(pi_.begin(), pi_.end(), 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = cost(basis_[r]);
      if (cb == 0.0) continue;
      const double* row = &binv_[r * rows_];
      for (std::size_t i = 0; i < rows_; ++i) pi_[i] += cb * row[i];
    }
  }

  void compute_reduced_costs() {
    for (std::size_t j = 0; j < cols_; ++j) reduced_[j] = lp_.c[j];
    for (std::size_t i = 0; i < rows_; ++i) {
      const double p = pi_[i];
      if (p == 0.0) continue;
      const double* row = &lp_.A[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) reduced_[j] -= p * row[j];
    }
    for (std::size_t i = 0; i < rows_; ++i) reduced_[cols_ + i] = -pi_[i];
  }

  long choose_entering() const {
    const bool bland = iterations_ >= bland_after_;
    long best = -1;
    double best_score = 0.0;
    for (std::size_t j = 0; j < total_; ++j) {
      if (row_of_[j] >= 0) continue;
      const double d = reduced_[j];
      double score = 0.0;
      if (!at_upper_[j] && d > opt_.optimality_tolerance && upper(j) > 0.0)
        score = d;
      else if (at_upper_[j] && d < -opt_.optimality_tolerance)
        score = -d;
      if (score <= 0.0) continue;
      if (bland) return static_cast<long>(j);
      if (score > best_score) {
        best_score = score;
        best = static_cast<long>(j);
      }
    }
    return best;
  }

  // Returns false when the entering direction is unbounded.
  bool step(std::size_t q) {
    for (std::size_t r = 0; r < rows_; ++r) {
      double s = 0.0;
      const double* row = &binv_[r * rows_];
      if (q < cols_) {
        for (std::size_t i = 0; i < rows_; ++i) s += row[i] * lp_.at(i, q);
      } else {
        s = row[q - cols_];
      }
      column_[r] = s;
    }
    const double sigma = at_upper_[q] ? -1.0 : 1.0;
    const bool bland = iterations_ > bland_after_;

    double t = upper(q);
    long leave_row = -1;
    bool leave_to_upper = false;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double alpha = column_[r];
      if (std::abs(alpha) <= opt_.pivot_tolerance) continue;
      const double delta = -sigma * alpha;
      const std::size_t var = basis_[r];
      double limit;
      bool to_upper;
      if (delta < 0.0) {
        limit = std::max(0.0, value_[var]) / -delta;
        to_upper = false;
      } else {
        const double ub = upper(var);
        if (ub == kInfinity) continue;
        limit = std::max(0.0, ub - value_[var]) / delta;
        to_upper = true;
      }
      bool take = false;
      if (limit < t - 1e-12) {
        take = true;
      } else if (limit <= t + 1e-12 && leave_row >= 0) {
        const auto cur = static_cast<std::size_t>(leave_row);
        take = bland ? var < basis_[cur]
                     : std::abs(alpha) > std::abs(column_[cur]);
      } else if (limit <= t && leave_row < 0) {
        take = true;
      }
      if (take) {
        t = std::min(t, limit);
        leave_row = static_cast<long>(r);
        leave_to_upper = to_upper;
      }
    }
    if (t == kInfinity) return false;

    value_[q] += sigma * t;
    for (std::size_t r = 0; r < rows_; ++r)
      value_[basis_[r]] -= sigma * t * column_[r];

    if (leave_row < 0) {
      at_upper_[q] = at_upper_[q] ? 0 : 1;
      value_[q] = at_upper_[q] ? upper(q) : 0.0;
      return true;
    }

    const auto r = static_cast<std::size_t>(leave_row);
    const double pivot = column_[r];
    if (std::abs(pivot) < opt_.pivot_tolerance)
      throw SolverError("pivot element below tolerance", pivots_);
    const std::size_t leaving = basis_[r];
    row_of_[leaving] = -1;
    at_upper_[leaving] = leave_to_upper ? 1 : 0;
    value_[leaving] = leave_to_upper ? upper(leaving) : 0.0;
    basis_[r] = q;
    row_of_[q] = static_cast<long>(r);
    at_upper_[q] = 0;

    double* prow = &binv_[r * rows_];
    for (std::size_t i = 0; i < rows_; ++i) prow[i] /= pivot;
    for (std::size_t k = 0; k < rows_; ++k) {
      if (k == r) continue;
      const double f = column_[k];
      if (f == 0.0) continue;
      double* krow = &binv_[k * rows_];
      for (std::size_t i = 0; i < rows_; ++i) krow[i] -= f * prow[i];
    }
    ++pivots_;
    if (pivots_ % opt_.refactor_interval == 0) refactor();
    return true;
  }

  // Rebuilds B^{-1} by Gauss-Jordan elimination with partial pivoting and
  // recomputes the basic values from the nonbasic bound assignment.
  void refactor() {
    std::vector<double> work(rows_ * 2 * rows_, 0.0);
    const std::size_t w = 2 * rows_;
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = 0; k < rows_; ++k)
        work[r * w + k] = entry(r, basis_[k]);
      work[r * w + rows_ + r] = 1.0;
    }
    for (std::size_t col = 0; col < rows_; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < rows_; ++r)
        if (std::abs(work[r * w + col]) > std::abs(work[piv * w + col]))
          piv = r;
      if (std::abs(work[piv * w + col]) < 1e-12)
        throw SolverError("singular basis during refactorization", pivots_);
      if (piv != col)
        for (std::size_t k = 0; k < w; ++k)
          std::swap(work[piv * w + k], work[col * w + k]);
      const double inv = 1.0 / work[col * w + col];
      for (std::size_t k = 0; k < w; ++k) work[col * w + k] *= inv;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (r == col) continue;
        const double f = work[r * w + col];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < w; ++k) work[r * w + k] -= f * work[col * w + k];
      }
    }
    // work = [I | B^{-1}] with rows indexed by basis position.
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t i = 0; i < rows_; ++i)
        binv_[r * rows_ + i] = work[r * w + rows_ + i];

    Vec rhs = lp_.b;
    for (std::size_t j = 0; j < total_; ++j) {
      if (row_of_[j] >= 0 || !at_upper_[j]) continue;
      const double ub = upper(j);
      for (std::size_t i = 0; i < rows_; ++i) rhs[i] -= entry(i, j) * ub;
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) s += binv_[r * rows_ + i] * rhs[i];
      value_[basis_[r]] = s;
    }
  }

  const BoundedLp& lp_;
  const SimplexOptions& opt_;
  std::size_t rows_, cols_, total_;
  std::vector<std::size_t> basis_;
  std::vector<long> row_of_;
  std::vector<std::uint8_t> at_upper_;
  Vec value_;
  std::vector<double> binv_;
  Vec reduced_;
  Vec pi_;
  Vec column_;
  std::size_t iterations_ = 0;
  std::size_t pivots_ = 0;
  std::size_t bland_after_ = 0;
  std::size_t max_iterations_ = 0;
};

}  // namespace

SimplexResult solve_bounded(const BoundedLp& problem,
                            const SimplexOptions& options) {
  if (problem.A.size() != problem.rows * problem.cols ||
      problem.b.size() != problem.rows || problem.c.size() != problem.cols ||
      problem.upper.size() != problem.cols)
    throw std::invalid_argument("solve_bounded: inconsistent dimensions");
  for (double v : problem.b)
    if (!(v >= 0.0))
      throw std::invalid_argument("solve_bounded: right-hand side must be >= 0");
  for (double v : problem.upper)
    if (!(v >= 0.0))
      throw std::invalid_argument("solve_bounded: upper bounds must be >= 0");
  BoundedSimplex solver(problem, options);
  return solver.run();
}

}  // namespace olp::lp
