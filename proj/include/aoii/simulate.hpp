#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "aoii/model.hpp"

namespace aoii {

// SplitMix64 (Vigna's public-domain mixer). Chosen so other languages can
// reproduce the exact stream: state += 0x9E3779B97F4A7C15, then the output
// is the two xor-shift/multiply rounds below. Unit doubles take the top 53
// bits: (next() >> 11) * 2^-53.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform draw in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct SimConfig {
  std::int64_t horizon = 1000000;  // total slots, burn-in included
  std::uint64_t seed = 0;
  std::int64_t burn_in = 1000;  // leading slots excluded from the averages
  SysState initial_state = {0, false};

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

// Empirical per-slot averages over the accounted span. The cost identity
// avg_cost == S*avg_aoii + p*drop_rate holds exactly by construction.
struct SimStats {
  double avg_cost = 0.0;
  double avg_aoii = 0.0;
  double drop_rate = 0.0;
  double sample_rate = 0.0;
  double stderr_cost = 0.0;  // batch means over 100 batches; NaN if too short
  std::vector<double> aoii_histogram;   // age v -> visit fraction, v = 0..K
  std::vector<double> state_occupancy;  // state_index -> visit fraction
  std::int64_t slots_accounted = 0;

  friend bool operator==(const SimStats&, const SimStats&) = default;
};

// Test hook: called once per accounted slot with what the step did.
struct SlotRecord {
  SysState state;
  Action action;
  bool dropped;
  SysState next;
};
using SlotObserver = std::function<void(const SlotRecord&)>;

// Runs the slotted chain under a stationary policy (indexed by state_index,
// admissible everywhere). Each slot consumes exactly two uniforms in fixed
// order: the transition draw across the kernel row, then the drop draw; the
// drop draw only matters on sampling slots, where a Bernoulli(q) drop is
// charged p. Deterministic for a given (params, policy, config).
SimStats simulate(const ModelParams& mp, const std::vector<Action>& policy,
                  const SimConfig& config, const SlotObserver& observer = {});

// Visit fractions over the enumerated states, entrywise comparable to
// StationaryDist for a threshold-policy run.
std::vector<double> empirical_distribution(const SimStats& stats);

}  // namespace aoii
