#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace aoii {

// Problem instance for the machine-tracking control problem.
//
//   q  : per-slot flip probability of the symmetric busy/free machine chain
//   q1 : per-slot completion probability while the machine serves an
//        assigned job (geometric service time)
//   S  : cost slope per unit of age of incorrect information
//   p  : penalty charged when an assigned job is dropped
//   K  : age cap of the bounded state space; must be at least min_age_cap
//        so the truncation loses no optimality
struct ModelParams {
  double q = 0.0;
  double q1 = 0.0;
  double S = 0.0;
  double p = 0.0;
  int K = 0;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// ceil() with a small relative guard, so arguments that are integers up to
// representation noise do not get bumped a full step.
long guarded_ceil(double x);

// Smallest age cap that keeps the capped problem exact:
// ceil(p*q / (S*(1-q))). Sampling is optimal at every age at or above it.
int min_age_cap(double q, double S, double p);

// Cap used when the caller does not pick one: min_age_cap + 5, at least 8.
int default_age_cap(double q, double S, double p);

// Convenience constructor; fills K from default_age_cap when absent.
ModelParams make_params(double q, double q1, double S, double p,
                        std::optional<int> cap = std::nullopt);

// One message per violated invariant; empty means the instance is valid.
std::vector<std::string> validate(const ModelParams& mp);

// Throws std::invalid_argument listing every violation.
void require_valid(const ModelParams& mp);

// MDP state: age counter v plus a flag telling whether the machine is busy
// with a job we assigned. serving implies v == 0.
struct SysState {
  int v = 0;
  bool serving = false;

  friend bool operator==(const SysState&, const SysState&) = default;
};

inline SysState synced_state() { return {0, false}; }
inline SysState serving_state() { return {0, true}; }
inline SysState aged_state(int v) { return {v, false}; }

enum class Action { idle = 0, sample = 1 };

// Canonical enumeration: (0,0), (0,1), (1,0), ..., (K,0).
// Index of (v,0) for v >= 1 is v + 1.
int state_index(SysState s);
SysState state_at(int index);
int state_count(const ModelParams& mp);  // K + 2
std::vector<SysState> enumerate_states(const ModelParams& mp);

// Only idle is allowed when the estimate already matches (v == 0) and while
// serving; at the cap only sampling is allowed, which keeps the truncation
// exact for any valid K.
bool admissible(SysState s, Action a, const ModelParams& mp);

// Per-slot cost S*v + a*q*p. Throws on an inadmissible action.
double step_cost(SysState s, Action a, const ModelParams& mp);

struct TransitionEntry {
  SysState next;
  double prob = 0.0;
};

// Sparse kernel row: at most two successors, strictly positive
// probabilities summing to one.
class TransitionRow {
 public:
  void add(SysState next, double prob);
  const TransitionEntry* begin() const { return entries_.data(); }
  const TransitionEntry* end() const { return entries_.data() + size_; }
  int size() const { return size_; }
  const TransitionEntry& operator[](int i) const { return entries_[i]; }
  double total() const;

 private:
  std::array<TransitionEntry, 2> entries_{};
  int size_ = 0;
};

// Kernel row for (s, a). Entry order is fixed and is part of the
// simulator's reproducibility contract:
//   (v,0) sample : (0,0):q      then (0,1):1-q
//   (v,0) idle   : (v+1,0):1-q  then (0,0):q     (v >= 1)
//   (0,0) idle   : (0,0):1-q    then (1,0):q
//   (0,1) idle   : (0,1):1-q1   then (1,0):q1
// Zero-probability entries are dropped (q1 = 1 collapses the last row).
TransitionRow transitions(SysState s, Action a, const ModelParams& mp);

}  // namespace aoii
