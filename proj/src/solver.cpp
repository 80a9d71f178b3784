#include "aoii/solver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace aoii {

namespace {

// Flat index-based kernel so the sweeps touch contiguous arrays.
struct Arcs {
  int next[2] = {0, 0};
  double prob[2] = {0.0, 0.0};
  int n = 0;
};

struct Kernel {
  int n = 0;
  std::vector<Arcs> idle, sample;
  std::vector<char> can_idle, can_sample;
  std::vector<double> cost_idle, cost_sample;
};

Kernel build_kernel(const ModelParams& mp) {
  Kernel k;
  k.n = state_count(mp);
  k.idle.resize(static_cast<std::size_t>(k.n));
  k.sample.resize(static_cast<std::size_t>(k.n));
  k.can_idle.assign(static_cast<std::size_t>(k.n), 0);
  k.can_sample.assign(static_cast<std::size_t>(k.n), 0);
  k.cost_idle.assign(static_cast<std::size_t>(k.n), 0.0);
  k.cost_sample.assign(static_cast<std::size_t>(k.n), 0.0);
  for (int i = 0; i < k.n; ++i) {
    const SysState s = state_at(i);
    for (const Action a : {Action::idle, Action::sample}) {
      if (!admissible(s, a, mp)) continue;
      Arcs arcs;
      for (const auto& e : transitions(s, a, mp)) {
        arcs.next[arcs.n] = state_index(e.next);
        arcs.prob[arcs.n] = e.prob;
        ++arcs.n;
      }
      const auto idx = static_cast<std::size_t>(i);
      if (a == Action::idle) {
        k.idle[idx] = arcs;
        k.can_idle[idx] = 1;
        k.cost_idle[idx] = step_cost(s, a, mp);
      } else {
        k.sample[idx] = arcs;
        k.can_sample[idx] = 1;
        k.cost_sample[idx] = step_cost(s, a, mp);
      }
    }
  }
  return k;
}

inline double expectation(const Arcs& arcs, const std::vector<double>& v) {
  double e = arcs.prob[0] * v[static_cast<std::size_t>(arcs.next[0])];
  if (arcs.n == 2) e += arcs.prob[1] * v[static_cast<std::size_t>(arcs.next[1])];
  return e;
}

void check_tolerance(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

}  // namespace

DiscountedSolve discounted_value_iteration(const ModelParams& mp, double alpha,
                                           double tol, long max_iterations) {
  require_valid(mp);
  check_tolerance(tol);
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1)");

  const Kernel k = build_kernel(mp);
  std::vector<double> v(static_cast<std::size_t>(k.n), 0.0);
  std::vector<double> w(static_cast<std::size_t>(k.n), 0.0);
  double diff = std::numeric_limits<double>::infinity();
  for (long it = 1; it <= max_iterations; ++it) {
    diff = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      if (k.can_idle[i]) best = k.cost_idle[i] + alpha * expectation(k.idle[i], v);
      if (k.can_sample[i]) {
        const double qs = k.cost_sample[i] + alpha * expectation(k.sample[i], v);
        if (qs < best) best = qs;
      }
      w[i] = best;
      diff = std::max(diff, std::fabs(w[i] - v[i]));
    }
    v.swap(w);
    if (diff <= tol) return DiscountedSolve{alpha, std::move(v), it, diff};
  }
  std::ostringstream os;
  os << "discounted value iteration did not reach tol=" << tol << " within "
     << max_iterations << " iterations (residual " << diff << ")";
  throw NonConvergence(os.str(), diff, max_iterations);
}

ThresholdCheck is_threshold(const std::vector<Action>& policy) {
  if (policy.size() < 3)
    throw std::invalid_argument("policy must cover (0,0), (0,1) and age 1");
  const int cap = static_cast<int>(policy.size()) - 2;
  int first_sample = 0;
  for (int age = 1; age <= cap; ++age) {
    if (policy[static_cast<std::size_t>(age + 1)] == Action::sample) {
      first_sample = age;
      break;
    }
  }
  if (first_sample == 0) return {PolicyShape::never_sample, std::nullopt};
  for (int age = first_sample; age <= cap; ++age) {
    if (policy[static_cast<std::size_t>(age + 1)] != Action::sample)
      return {PolicyShape::not_threshold, std::nullopt};
  }
  return {PolicyShape::threshold, first_sample};
}

std::vector<Action> extract_policy(const ModelParams& mp,
                                   const std::vector<double>& rel_values) {
  if (rel_values.size() != static_cast<std::size_t>(state_count(mp)))
    throw std::invalid_argument("value vector does not match the state space");
  const Kernel k = build_kernel(mp);
  std::vector<Action> policy(rel_values.size(), Action::idle);
  for (std::size_t i = 0; i < rel_values.size(); ++i) {
    if (!k.can_idle[i]) {
      policy[i] = Action::sample;
      continue;
    }
    if (!k.can_sample[i]) continue;
    const double qi = k.cost_idle[i] + expectation(k.idle[i], rel_values);
    const double qs = k.cost_sample[i] + expectation(k.sample[i], rel_values);
    if (qs < qi) policy[i] = Action::sample;  // tie keeps idle
  }
  return policy;
}

SolveResult relative_value_iteration(const ModelParams& mp, double tol,
                                     long max_iterations) {
  require_valid(mp);
  check_tolerance(tol);

  const Kernel k = build_kernel(mp);
  std::vector<double> v(static_cast<std::size_t>(k.n), 0.0);
  std::vector<double> w(static_cast<std::size_t>(k.n), 0.0);
  double diff = std::numeric_limits<double>::infinity();
  for (long it = 1; it <= max_iterations; ++it) {
    const double ref = v[0];  // value at (0,0) from the previous sweep
    diff = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      if (k.can_idle[i]) best = k.cost_idle[i] + expectation(k.idle[i], v);
      if (k.can_sample[i]) {
        const double qs = k.cost_sample[i] + expectation(k.sample[i], v);
        if (qs < best) best = qs;
      }
      w[i] = best - ref;
      diff = std::max(diff, std::fabs(w[i] - v[i]));
    }
    v.swap(w);
    if (diff <= tol) {
      SolveResult out;
      out.rel_values = std::move(v);
      out.avg_cost = out.rel_values[0];
      out.policy = extract_policy(mp, out.rel_values);
      const auto check = is_threshold(out.policy);
      if (check.shape == PolicyShape::threshold) out.threshold = check.v_th;
      out.iterations = it;
      out.residual = diff;
      return out;
    }
  }
  std::ostringstream os;
  os << "relative value iteration did not reach tol=" << tol << " within "
     << max_iterations << " iterations (residual " << diff << ")";
  throw NonConvergence(os.str(), diff, max_iterations);
}

}  // namespace aoii
