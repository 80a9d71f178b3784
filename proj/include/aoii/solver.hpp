#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "aoii/model.hpp"

namespace aoii {

// Raised when an iterative solve does not reach its tolerance within the
// iteration budget.
struct NonConvergence : std::runtime_error {
  NonConvergence(const std::string& what, double residual_, long iterations_)
      : std::runtime_error(what), residual(residual_), iterations(iterations_) {}
  double residual;
  long iterations;
};

// Discounted optimal values on the capped space, from value iteration
// started at zero. residual is the sup-norm of the last update, which
// bounds the Bellman residual of the returned values.
struct DiscountedSolve {
  double alpha = 0.0;
  std::vector<double> values;  // indexed by state_index
  long iterations = 0;
  double residual = 0.0;

  double value(SysState s) const { return values[static_cast<std::size_t>(state_index(s))]; }
};

DiscountedSolve discounted_value_iteration(const ModelParams& mp, double alpha,
                                           double tol = 1e-10,
                                           long max_iterations = 1000000);

// Shape of a stationary policy over the aged states 1..K.
enum class PolicyShape { threshold, not_threshold, never_sample };

struct ThresholdCheck {
  PolicyShape shape = PolicyShape::not_threshold;
  std::optional<int> v_th;  // set iff shape == threshold
};

// Smallest sampled age when the sampled set is an up-set {v_th, ..., K};
// never_sample when no aged state samples at all.
ThresholdCheck is_threshold(const std::vector<Action>& policy);

// Average-cost solve. rel_values are normalized at the synced state (0,0):
// the fixed point's value there equals the optimal average cost per slot.
struct SolveResult {
  std::vector<double> rel_values;  // indexed by state_index
  double avg_cost = 0.0;
  std::vector<Action> policy;  // indexed by state_index
  std::optional<int> threshold;  // set iff the policy is threshold-shaped
  long iterations = 0;
  double residual = 0.0;

  double rel_value(SysState s) const {
    return rel_values[static_cast<std::size_t>(state_index(s))];
  }
  Action action(SysState s) const {
    return policy[static_cast<std::size_t>(state_index(s))];
  }
};

SolveResult relative_value_iteration(const ModelParams& mp, double tol = 1e-10,
                                     long max_iterations = 1000000);

// Greedy policy for a relative value vector. Ties go to idle, so the
// extracted threshold is the largest optimal one.
std::vector<Action> extract_policy(const ModelParams& mp,
                                   const std::vector<double>& rel_values);

}  // namespace aoii
