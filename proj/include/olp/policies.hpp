#pragma once

#include <stdexcept>
#include <string>

#include "olp/types.hpp"

namespace olp::policy {

enum class Kind {
  kResolveSingleSample,
  kOneShotSingleSample,
  kFixedPrice,
  kGreedyAccept,
  kOracleOfflinePrice,
};

struct PolicySpec {
  Kind kind = Kind::kResolveSingleSample;
  Vec price;  // kFixedPrice only

  std::string name() const;
  bool online() const { return kind != Kind::kOracleOfflinePrice; }
};

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& name);  // throws invalid_argument

// Solver failure inside a policy, tagged with the arrival index.
class PolicyError : public std::runtime_error {
 public:
  PolicyError(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

// Re-solves  min_{p>=0} b.p + sum_{i>=k} (u~_i - a~_i.p)^+  before every
// arrival k over the remaining single-sample orders (index k included), then
// accepts iff u_k > a_k.p and the remaining budget covers a_k.
RunRecord run_resolve_single_sample(const Instance& inst);

// Same dual solved once before the first arrival; price reused throughout.
RunRecord run_one_shot_single_sample(const Instance& inst);

RunRecord run_fixed_price(const Instance& inst, const Vec& p);

// Fixed price zero.
RunRecord run_greedy_accept(const Instance& inst);

// Hindsight diagnostic: constant threshold at the dual price of the offline
// LP over the realized orders. Not an online policy.
RunRecord run_oracle_offline_price(const Instance& inst);

RunRecord run_policy(const PolicySpec& spec, const Instance& inst);

}  // namespace olp::policy
