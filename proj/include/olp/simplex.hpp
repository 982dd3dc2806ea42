#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "olp/types.hpp"

namespace olp::lp {

// Raised when the basis becomes numerically singular or the iteration cap
// is hit. Carries the number of pivots performed before the failure.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::size_t pivots)
      : std::runtime_error(what), pivots_(pivots) {}
  std::size_t pivot_count() const { return pivots_; }

 private:
  std::size_t pivots_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

//   maximize    c^T x
//   subject to  A x <= b,   0 <= x <= upper
// with b >= 0 so that the all-slack basis is feasible. A is row-major.
struct BoundedLp {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> A;
  Vec b;
  Vec c;
  Vec upper;  // kInfinity for unbounded columns

  double& at(std::size_t r, std::size_t c_) { return A[r * cols + c_]; }
  double at(std::size_t r, std::size_t c_) const { return A[r * cols + c_]; }
};

enum class SimplexStatus { kOptimal, kUnbounded };

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-8;
  double optimality_tolerance = 1e-11;
  std::size_t refactor_interval = 64;
  // 0 means 2 * (rows + cols) Dantzig iterations before switching to Bland.
  std::size_t bland_after = 0;
};

struct SimplexResult {
  SimplexStatus status = SimplexStatus::kOptimal;
  Vec x;
  double value = 0.0;
  Vec duals;  // row multipliers c_B^T B^{-1}, clamped to >= 0
  std::size_t iterations = 0;
  std::size_t pivots = 0;
  std::size_t basic_structurals = 0;
};

// Dense revised simplex with bounded variables (bound flips do not change
// the basis). Dantzig pricing first, then Bland's rule to rule out cycling.
SimplexResult solve_bounded(const BoundedLp& problem,
                            const SimplexOptions& options = {});

}  // namespace olp::lp
