#pragma once

#include <utility>
#include <vector>

#include "aoii/model.hpp"

namespace aoii {

// Sample exactly when the age reaches v_th.
struct ThresholdPolicy {
  int v_th = 1;
};

// Sufficient sampling age: sampling is optimal at every age at or above
// max(1, ceil(p*q/(S*(1-q)))). The optimal threshold never exceeds it.
int upper_threshold_bound(const ModelParams& mp);

// Necessary sampling age: max(ceil(p*q^2/((1-q)*S) - 1/(2*q1)), 1). The
// optimal threshold never falls below it.
int lower_threshold_bound(const ModelParams& mp);

// Full action table on the capped space for a threshold policy
// (requires 1 <= v_th <= K).
std::vector<Action> threshold_policy_actions(const ModelParams& mp, int v_th);

// Stationary distribution of the chain a threshold policy induces, over the
// enumeration 0=(0,0), 1=(0,1), 2=(1,0), ..., v_th+1=(v_th,0).
struct StationaryDist {
  std::vector<double> probs;
};

// Closed form: probs[2] = q1*q / (2*q1 - 2*q1*(1-q)^v_th + q*(1-q)^v_th),
// a geometric tail with ratio (1-q) above it, and the first two entries
// recovered from their balance equations, then normalized.
StationaryDist stationary_distribution(const ModelParams& mp,
                                       ThresholdPolicy policy);

// Closed-form average cost per slot of a threshold policy:
// sum_{i=0}^{v_th-1} S*(i+1)*probs[2]*(1-q)^i + q*(1-q)^(v_th-1)*probs[2]*p.
double threshold_average_cost(const ModelParams& mp, ThresholdPolicy policy);

struct ThresholdSearchResult {
  int v_lower = 1;
  int v_upper = 1;
  int v_opt = 1;
  double cost_opt = 0.0;
  std::vector<std::pair<int, double>> cost_table;  // every v in [v_lower, v_upper]
};

// Exhaustive search over the bracketed range. Ties go to the larger
// threshold, matching the solver's idle-preferring tie-break.
ThresholdSearchResult optimal_threshold(const ModelParams& mp);

}  // namespace aoii
