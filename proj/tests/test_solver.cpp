#include <doctest.h>

#include <cmath>

#include "aoii/solver.hpp"
#include "aoii/threshold.hpp"
#include "oracles.hpp"

using namespace aoii;

TEST_CASE("vanishing discount recovers the average cost") {
  const ModelParams mp = make_params(0.5, 0.5, 1.0, 2.0);
  const DiscountedSolve s = discounted_value_iteration(mp, 0.999, 1e-10);
  CHECK(s.residual <= 1e-10);
  const double approx = (1.0 - s.alpha) * s.value(synced_state());
  CHECK(std::fabs(approx - 2.0 / 3.0) <= 0.02 * (2.0 / 3.0));
}

TEST_CASE("discounted values increase strictly in the age") {
  SplitMix64 rng(56);
  for (int trial = 0; trial < 6; ++trial) {
    const ModelParams mp = testutil::draw_params(rng);
    for (const double alpha : {0.9, 0.99, 0.999}) {
      const DiscountedSolve s = discounted_value_iteration(mp, alpha, 1e-11);
      for (int v = 0; v < mp.K; ++v) {
        CHECK(s.value(aged_state(v + 1)) > s.value(aged_state(v)));
      }
      // aged-state differences keep the slope-S floor
      for (int v = 1; v < mp.K; ++v) {
        CHECK(s.value(aged_state(v + 1)) - s.value(aged_state(v)) >=
              mp.S * (1.0 - 1e-6));
      }
    }
  }
  // literal unit-slope floor at S=1
  const ModelParams unit = make_params(0.4, 0.3, 1.0, 20.0);
  const DiscountedSolve s = discounted_value_iteration(unit, 0.99, 1e-11);
  for (int v = 1; v < unit.K; ++v) {
    CHECK(s.value(aged_state(v + 1)) - s.value(aged_state(v)) >= 1.0 - 1e-6);
  }
}

TEST_CASE("discounted values scale linearly with the cost scale") {
  const ModelParams mp = make_params(0.4, 0.3, 2.0, 10.0);
  ModelParams scaled = mp;
  scaled.S *= 3.0;
  scaled.p *= 3.0;
  const DiscountedSolve a = discounted_value_iteration(mp, 0.95, 1e-12);
  const DiscountedSolve b = discounted_value_iteration(scaled, 0.95, 1e-12);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(std::fabs(b.values[i] - 3.0 * a.values[i]) <=
          1e-8 * std::max(1.0, std::fabs(b.values[i])));
  }
}

TEST_CASE("discounted solver rejects bad inputs") {
  const ModelParams mp = make_params(0.5, 0.5, 1.0, 2.0);
  CHECK_THROWS_AS(discounted_value_iteration(mp, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(discounted_value_iteration(mp, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(discounted_value_iteration(mp, 0.9, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(discounted_value_iteration(mp, 0.9, 1e-10, 2), NonConvergence);
  try {
    discounted_value_iteration(mp, 0.9, 1e-10, 2);
  } catch (const NonConvergence& e) {
    CHECK(e.iterations == 2);
    CHECK(e.residual > 0.0);
  }
}

TEST_CASE("always-sampling instance: average cost 2/3, threshold 1") {
  const ModelParams mp = make_params(0.5, 0.5, 1.0, 2.0);
  const SolveResult r = relative_value_iteration(mp, 1e-10);
  CHECK(std::fabs(r.avg_cost - 2.0 / 3.0) <= 1e-6);
  REQUIRE(r.threshold.has_value());
  CHECK(*r.threshold == 1);
  CHECK(r.avg_cost == r.rel_value(synced_state()));
  CHECK(r.residual <= 1e-10);
  for (int v = 1; v <= mp.K; ++v) CHECK(r.action(aged_state(v)) == Action::sample);
}

TEST_CASE("reference instance: threshold 6, cost near 1.1947") {
  const ModelParams mp = make_params(0.4, 0.3, 1.0, 20.0, 20);
  const SolveResult r = relative_value_iteration(mp, 1e-10);
  REQUIRE(r.threshold.has_value());
  CHECK(*r.threshold == 6);
  CHECK(std::fabs(r.avg_cost - 1.1947) <= 1e-3);
  // frozen closed-form value for the same instance
  CHECK(std::fabs(r.avg_cost - 1.194708100377064) <= 1e-6);
  for (int v = 1; v <= 5; ++v) CHECK(r.action(aged_state(v)) == Action::idle);
  for (int v = 6; v <= mp.K; ++v) CHECK(r.action(aged_state(v)) == Action::sample);
  CHECK(r.action(synced_state()) == Action::idle);
  CHECK(r.action(serving_state()) == Action::idle);
}

TEST_CASE("always-sampling corner: S >= p and q <= 1/2 force threshold 1") {
  SplitMix64 rng(78);
  for (int trial = 0; trial < 20; ++trial) {
    ModelParams mp = testutil::draw_params(rng);
    mp.q = 0.05 + 0.45 * rng.next_unit();
    if (mp.S < mp.p) std::swap(mp.S, mp.p);
    mp.K = upper_threshold_bound(mp) + 5;
    const SolveResult r = relative_value_iteration(mp, 1e-10);
    REQUIRE(r.threshold.has_value());
    CHECK(*r.threshold == 1);
  }
}

TEST_CASE("threshold structure and closed-form agreement on random draws") {
  SplitMix64 rng(90);
  for (int trial = 0; trial < 200; ++trial) {
    const ModelParams mp = testutil::draw_params(rng);
    const SolveResult r = relative_value_iteration(mp, 1e-10);
    const ThresholdCheck check = is_threshold(r.policy);
    REQUIRE(check.shape == PolicyShape::threshold);
    const double closed =
        threshold_average_cost(mp, ThresholdPolicy{*check.v_th});
    CHECK(std::fabs(r.avg_cost - closed) <= 1e-6 * std::max(1.0, closed));
  }
}

TEST_CASE("closed-form value identities at the solved fixed point") {
  SplitMix64 rng(102);
  for (int trial = 0; trial < 25; ++trial) {
    const ModelParams mp = testutil::draw_params(rng);
    const SolveResult r = relative_value_iteration(mp, 1e-10);
    const double g = r.avg_cost;
    const double tol = 1e-6 * std::max(1.0, g);
    CHECK(std::fabs(r.rel_value(aged_state(1)) - (1.0 + mp.q) / mp.q * g) <= tol);
    CHECK(std::fabs(r.rel_value(serving_state()) -
                    (1.0 / mp.q + 1.0 - 1.0 / mp.q1) * g) <= tol);
  }
}

TEST_CASE("relative-value differences between aged states lie in [S, S/q]") {
  SplitMix64 rng(114);
  for (int trial = 0; trial < 25; ++trial) {
    const ModelParams mp = testutil::draw_params(rng);
    const SolveResult r = relative_value_iteration(mp, 1e-10);
    for (int v = 1; v < mp.K; ++v) {
      const double d = r.rel_value(aged_state(v + 1)) - r.rel_value(aged_state(v));
      CHECK(d >= mp.S * (1.0 - 1e-6));
      CHECK(d <= mp.S / mp.q * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("is_threshold classifies hand-built policies") {
  const std::vector<Action> up{Action::idle, Action::idle, Action::idle,
                               Action::sample, Action::sample};
  const ThresholdCheck a = is_threshold(up);
  CHECK(a.shape == PolicyShape::threshold);
  CHECK(a.v_th == 2);

  const std::vector<Action> hole{Action::idle, Action::idle, Action::sample,
                                 Action::idle, Action::sample};
  CHECK(is_threshold(hole).shape == PolicyShape::not_threshold);
  CHECK_FALSE(is_threshold(hole).v_th.has_value());

  const std::vector<Action> quiet{Action::idle, Action::idle, Action::idle,
                                  Action::idle, Action::idle};
  CHECK(is_threshold(quiet).shape == PolicyShape::never_sample);
  CHECK_FALSE(is_threshold(quiet).v_th.has_value());

  CHECK_THROWS_AS(is_threshold({Action::idle, Action::idle}),
                  std::invalid_argument);
}

TEST_CASE("extract_policy reproduces the solved policy and admissibility") {
  const ModelParams mp = make_params(0.4, 0.3, 1.0, 20.0);
  const SolveResult r = relative_value_iteration(mp, 1e-10);
  const std::vector<Action> again = extract_policy(mp, r.rel_values);
  CHECK(again == r.policy);
  for (int i = 0; i < state_count(mp); ++i) {
    CHECK(admissible(state_at(i), r.policy[static_cast<std::size_t>(i)], mp));
  }
  CHECK_THROWS_AS(extract_policy(mp, std::vector<double>(3, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("relative value iteration reports non-convergence") {
  const ModelParams mp = make_params(0.4, 0.3, 1.0, 20.0);
  CHECK_THROWS_AS(relative_value_iteration(mp, 1e-10, 3), NonConvergence);
  try {
    relative_value_iteration(mp, 1e-10, 3);
  } catch (const NonConvergence& e) {
    CHECK(e.iterations == 3);
    CHECK(e.residual > 1e-10);
  }
  CHECK_THROWS_AS(relative_value_iteration(mp, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(relative_value_iteration(ModelParams{0.0, 0.3, 1.0, 2.0, 8}),
                  std::invalid_argument);
}
