#include "aoii/simulate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace aoii {

namespace {

constexpr int kBatches = 100;

struct Step {
  int next[2] = {0, 0};
  double first_prob = 1.0;  // probability of entry 0 in the kernel row
  int v = 0;
  bool sampling = false;
};

void check_inputs(const ModelParams& mp, const std::vector<Action>& policy,
                  const SimConfig& config) {
  require_valid(mp);
  const int n = state_count(mp);
  if (static_cast<int>(policy.size()) != n) {
    throw std::invalid_argument("policy has " + std::to_string(policy.size()) +
                                " entries, expected " + std::to_string(n));
  }
  for (int i = 0; i < n; ++i) {
    if (!admissible(state_at(i), policy[i], mp)) {
      throw std::invalid_argument("policy picks an inadmissible action at state " +
                                  std::to_string(i));
    }
  }
  if (config.horizon <= 0) {
    throw std::invalid_argument("horizon must be positive");
  }
  if (config.burn_in < 0 || config.burn_in >= config.horizon) {
    throw std::invalid_argument("burn_in must lie in [0, horizon)");
  }
  const SysState init = config.initial_state;
  if (init.v < 0 || init.v > mp.K || (init.serving && init.v != 0)) {
    throw std::invalid_argument("initial_state is not a state of this instance");
  }
}

}  // namespace

SimStats simulate(const ModelParams& mp, const std::vector<Action>& policy,
                  const SimConfig& config, const SlotObserver& observer) {
  check_inputs(mp, policy, config);

  const int n = state_count(mp);
  std::vector<Step> steps(n);
  for (int i = 0; i < n; ++i) {
    const SysState s = state_at(i);
    const TransitionRow row = transitions(s, policy[i], mp);
    Step& st = steps[i];
    st.v = s.v;
    st.sampling = policy[i] == Action::sample;
    st.next[0] = state_index(row[0].next);
    st.next[1] = row.size() > 1 ? state_index(row[1].next) : st.next[0];
    st.first_prob = row[0].prob;
  }

  const std::int64_t accounted = config.horizon - config.burn_in;
  const std::int64_t batch_size = accounted / kBatches;

  SplitMix64 rng(config.seed);
  SimStats stats;
  stats.aoii_histogram.assign(mp.K + 1, 0.0);
  stats.state_occupancy.assign(n, 0.0);
  stats.slots_accounted = accounted;

  std::int64_t age_sum = 0;
  std::int64_t drops = 0;
  std::int64_t samples = 0;

  double batch_sum = 0.0;
  double batch_mean_sum = 0.0;
  double batch_mean_sq_sum = 0.0;

  int cur = state_index(config.initial_state);
  for (std::int64_t t = 0; t < config.horizon; ++t) {
    const Step& st = steps[cur];
    // Fixed stream: transition draw first, drop draw second, every slot.
    const double u_move = rng.next_unit();
    const double u_drop = rng.next_unit();
    const int nxt = u_move < st.first_prob ? st.next[0] : st.next[1];
    const bool dropped = st.sampling && u_drop < mp.q;

    if (t >= config.burn_in) {
      age_sum += st.v;
      drops += dropped ? 1 : 0;
      samples += st.sampling ? 1 : 0;
      stats.aoii_histogram[st.v] += 1.0;
      stats.state_occupancy[cur] += 1.0;

      const std::int64_t k = t - config.burn_in;
      if (batch_size > 0 && k < batch_size * kBatches) {
        batch_sum += mp.S * st.v + (dropped ? mp.p : 0.0);
        if ((k + 1) % batch_size == 0) {
          const double mean = batch_sum / static_cast<double>(batch_size);
          batch_mean_sum += mean;
          batch_mean_sq_sum += mean * mean;
          batch_sum = 0.0;
        }
      }

      if (observer) {
        observer({state_at(cur), policy[cur], dropped, state_at(nxt)});
      }
    }
    cur = nxt;
  }

  const double nd = static_cast<double>(accounted);
  stats.avg_aoii = static_cast<double>(age_sum) / nd;
  stats.drop_rate = static_cast<double>(drops) / nd;
  stats.sample_rate = static_cast<double>(samples) / nd;
  stats.avg_cost = mp.S * stats.avg_aoii + mp.p * stats.drop_rate;
  for (double& h : stats.aoii_histogram) h /= nd;
  for (double& h : stats.state_occupancy) h /= nd;

  if (batch_size > 0) {
    const double b = static_cast<double>(kBatches);
    const double mean = batch_mean_sum / b;
    double var = (batch_mean_sq_sum - b * mean * mean) / (b - 1.0);
    if (var < 0.0) var = 0.0;  // rounding can push a constant series negative
    stats.stderr_cost = std::sqrt(var / b);
  } else {
    stats.stderr_cost = std::numeric_limits<double>::quiet_NaN();
  }
  return stats;
}

std::vector<double> empirical_distribution(const SimStats& stats) {
  return stats.state_occupancy;
}

}  // namespace aoii
