#include "aoii/threshold.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace aoii {

namespace {

// The bounds and closed forms do not involve the cap, so they only need the
// rate and cost fields to be in range.
void require_valid_rates(const ModelParams& mp) {
  ModelParams probe = mp;
  probe.K = std::numeric_limits<int>::max();
  require_valid(probe);
}

void require_vth(int v_th) {
  if (v_th < 1) {
    std::ostringstream os;
    os << "threshold must be at least 1, got " << v_th;
    throw std::invalid_argument(os.str());
  }
}

double tail_start_prob(const ModelParams& mp, int v_th) {
  const double g = std::pow(1.0 - mp.q, v_th);
  return mp.q1 * mp.q / (2.0 * mp.q1 - 2.0 * mp.q1 * g + mp.q * g);
}

}  // namespace

int upper_threshold_bound(const ModelParams& mp) {
  require_valid_rates(mp);
  return std::max(1, min_age_cap(mp.q, mp.S, mp.p));
}

int lower_threshold_bound(const ModelParams& mp) {
  require_valid_rates(mp);
  const double x =
      mp.p * mp.q * mp.q / ((1.0 - mp.q) * mp.S) - 1.0 / (2.0 * mp.q1);
  return std::max(static_cast<int>(guarded_ceil(x)), 1);
}

std::vector<Action> threshold_policy_actions(const ModelParams& mp, int v_th) {
  require_valid(mp);
  require_vth(v_th);
  if (v_th > mp.K) {
    std::ostringstream os;
    os << "threshold " << v_th << " exceeds the age cap K=" << mp.K;
    throw std::invalid_argument(os.str());
  }
  std::vector<Action> policy(static_cast<std::size_t>(state_count(mp)),
                             Action::idle);
  for (int v = v_th; v <= mp.K; ++v)
    policy[static_cast<std::size_t>(v + 1)] = Action::sample;
  return policy;
}

StationaryDist stationary_distribution(const ModelParams& mp,
                                       ThresholdPolicy policy) {
  require_valid_rates(mp);
  require_vth(policy.v_th);
  const int v_th = policy.v_th;
  std::vector<double> probs(static_cast<std::size_t>(v_th + 2), 0.0);

  // Geometric tail over the aged states, built incrementally so consecutive
  // entries keep the exact ratio (1-q).
  probs[2] = tail_start_prob(mp, v_th);
  for (int i = 1; i < v_th; ++i)
    probs[static_cast<std::size_t>(2 + i)] =
        probs[static_cast<std::size_t>(1 + i)] * (1.0 - mp.q);

  // Balance at (0,1): q1*p(1) = (1-q)*p(v_th). Balance at (0,0) reduces to
  // p(0) = sum of the aged states.
  probs[1] = (1.0 - mp.q) * probs[static_cast<std::size_t>(v_th + 1)] / mp.q1;
  double aged = 0.0;
  for (int i = 0; i < v_th; ++i) aged += probs[static_cast<std::size_t>(2 + i)];
  probs[0] = aged;

  double total = probs[0] + probs[1] + aged;
  for (auto& x : probs) x /= total;
  return StationaryDist{std::move(probs)};
}

double threshold_average_cost(const ModelParams& mp, ThresholdPolicy policy) {
  require_valid_rates(mp);
  require_vth(policy.v_th);
  const int v_th = policy.v_th;
  const double p2 = tail_start_prob(mp, v_th);
  double aoii = 0.0;
  double g = 1.0;  // (1-q)^i
  for (int i = 0; i < v_th; ++i) {
    aoii += mp.S * (i + 1) * p2 * g;
    if (i + 1 < v_th) g *= 1.0 - mp.q;
  }
  return aoii + mp.q * g * p2 * mp.p;  // g == (1-q)^(v_th-1)
}

ThresholdSearchResult optimal_threshold(const ModelParams& mp) {
  require_valid_rates(mp);
  ThresholdSearchResult out;
  out.v_lower = lower_threshold_bound(mp);
  out.v_upper = upper_threshold_bound(mp);
  out.cost_table.reserve(static_cast<std::size_t>(out.v_upper - out.v_lower + 1));
  bool first = true;
  for (int v = out.v_lower; v <= out.v_upper; ++v) {
    const double cost = threshold_average_cost(mp, ThresholdPolicy{v});
    out.cost_table.emplace_back(v, cost);
    if (first || cost <= out.cost_opt) {  // ties move to the larger threshold
      out.v_opt = v;
      out.cost_opt = cost;
      first = false;
    }
  }
  return out;
}

}  // namespace aoii
