#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "aoii/model.hpp"
#include "aoii/simulate.hpp"
#include "aoii/solver.hpp"
#include "aoii/sweep.hpp"
#include "aoii/threshold.hpp"

namespace py = pybind11;
using namespace aoii;

namespace {

std::string params_repr(const ModelParams& mp) {
  std::ostringstream s;
  s << "ModelParams(q=" << mp.q << ", q1=" << mp.q1 << ", S=" << mp.S
    << ", p=" << mp.p << ", K=" << mp.K << ")";
  return s.str();
}

std::string state_repr(const SysState& st) {
  std::ostringstream s;
  s << "SysState(v=" << st.v << ", serving=" << (st.serving ? "True" : "False")
    << ")";
  return s.str();
}

}  // namespace

PYBIND11_MODULE(aoii, m) {
  m.doc() = "solver and simulator for the machine-tracking threshold problem";

  py::register_exception<NonConvergence>(m, "NonConvergence");

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double q, double q1, double S, double p,
                       std::optional<int> K) {
             return make_params(q, q1, S, p, K);
           }),
           py::arg("q"), py::arg("q1"), py::arg("S"), py::arg("p"),
           py::arg("K") = std::nullopt)
      .def_readwrite("q", &ModelParams::q)
      .def_readwrite("q1", &ModelParams::q1)
      .def_readwrite("S", &ModelParams::S)
      .def_readwrite("p", &ModelParams::p)
      .def_readwrite("K", &ModelParams::K)
      .def("__eq__", [](const ModelParams& a, const ModelParams& b) { return a == b; })
      .def("__repr__", &params_repr);

  m.def("min_age_cap", &min_age_cap, py::arg("q"), py::arg("S"), py::arg("p"));
  m.def("default_age_cap", &default_age_cap, py::arg("q"), py::arg("S"),
        py::arg("p"));
  m.def("validate", &validate, py::arg("params"),
        "one message per violated invariant; empty list means valid");
  m.def("require_valid", &require_valid, py::arg("params"));

  py::class_<SysState>(m, "SysState")
      .def(py::init([](int v, bool serving) { return SysState{v, serving}; }),
           py::arg("v") = 0, py::arg("serving") = false)
      .def_readwrite("v", &SysState::v)
      .def_readwrite("serving", &SysState::serving)
      .def("__eq__", [](const SysState& a, const SysState& b) { return a == b; })
      .def("__repr__", &state_repr);

  m.def("synced_state", &synced_state);
  m.def("serving_state", &serving_state);
  m.def("aged_state", &aged_state, py::arg("v"));

  py::enum_<Action>(m, "Action")
      .value("idle", Action::idle)
      .value("sample", Action::sample);

  m.def("state_index", &state_index, py::arg("state"));
  m.def("state_at", &state_at, py::arg("index"));
  m.def("state_count", &state_count, py::arg("params"));
  m.def("enumerate_states", &enumerate_states, py::arg("params"));
  m.def("admissible", &admissible, py::arg("state"), py::arg("action"),
        py::arg("params"));
  m.def("step_cost", &step_cost, py::arg("state"), py::arg("action"),
        py::arg("params"));
  m.def(
      "transitions",
      [](const SysState& s, Action a, const ModelParams& mp) {
        std::vector<std::pair<SysState, double>> out;
        for (const TransitionEntry& e : transitions(s, a, mp)) {
          out.emplace_back(e.next, e.prob);
        }
        return out;
      },
      py::arg("state"), py::arg("action"), py::arg("params"),
      "kernel row as (next_state, probability) pairs in the fixed order");

  py::class_<DiscountedSolve>(m, "DiscountedSolve")
      .def_readonly("alpha", &DiscountedSolve::alpha)
      .def_readonly("values", &DiscountedSolve::values)
      .def_readonly("iterations", &DiscountedSolve::iterations)
      .def_readonly("residual", &DiscountedSolve::residual)
      .def("value", &DiscountedSolve::value, py::arg("state"));

  m.def("discounted_value_iteration", &discounted_value_iteration,
        py::arg("params"), py::arg("alpha"), py::arg("tol") = 1e-10,
        py::arg("max_iterations") = 1000000L);

  py::enum_<PolicyShape>(m, "PolicyShape")
      .value("threshold", PolicyShape::threshold)
      .value("not_threshold", PolicyShape::not_threshold)
      .value("never_sample", PolicyShape::never_sample);

  py::class_<ThresholdCheck>(m, "ThresholdCheck")
      .def_readonly("shape", &ThresholdCheck::shape)
      .def_readonly("v_th", &ThresholdCheck::v_th);

  m.def("is_threshold", &is_threshold, py::arg("policy"));

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("rel_values", &SolveResult::rel_values)
      .def_readonly("avg_cost", &SolveResult::avg_cost)
      .def_readonly("policy", &SolveResult::policy)
      .def_readonly("threshold", &SolveResult::threshold)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("residual", &SolveResult::residual)
      .def("rel_value", &SolveResult::rel_value, py::arg("state"))
      .def("action", &SolveResult::action, py::arg("state"));

  m.def("relative_value_iteration", &relative_value_iteration, py::arg("params"),
        py::arg("tol") = 1e-10, py::arg("max_iterations") = 1000000L);
  m.def("extract_policy", &extract_policy, py::arg("params"),
        py::arg("rel_values"));

  m.def("upper_threshold_bound", &upper_threshold_bound, py::arg("params"));
  m.def("lower_threshold_bound", &lower_threshold_bound, py::arg("params"));
  m.def("threshold_policy_actions", &threshold_policy_actions, py::arg("params"),
        py::arg("v_th"));
  m.def(
      "stationary_distribution",
      [](const ModelParams& mp, int v_th) {
        return stationary_distribution(mp, ThresholdPolicy{v_th}).probs;
      },
      py::arg("params"), py::arg("v_th"),
      "stationary probabilities over the enumerated states of the induced chain");
  m.def(
      "threshold_average_cost",
      [](const ModelParams& mp, int v_th) {
        return threshold_average_cost(mp, ThresholdPolicy{v_th});
      },
      py::arg("params"), py::arg("v_th"));

  py::class_<ThresholdSearchResult>(m, "ThresholdSearchResult")
      .def_readonly("v_lower", &ThresholdSearchResult::v_lower)
      .def_readonly("v_upper", &ThresholdSearchResult::v_upper)
      .def_readonly("v_opt", &ThresholdSearchResult::v_opt)
      .def_readonly("cost_opt", &ThresholdSearchResult::cost_opt)
      .def_readonly("cost_table", &ThresholdSearchResult::cost_table);

  m.def("optimal_threshold", &optimal_threshold, py::arg("params"));

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init([](std::int64_t horizon, std::uint64_t seed,
                       std::int64_t burn_in, SysState initial_state) {
             return SimConfig{horizon, seed, burn_in, initial_state};
           }),
           py::arg("horizon") = 1000000, py::arg("seed") = 0,
           py::arg("burn_in") = 1000, py::arg("initial_state") = synced_state())
      .def_readwrite("horizon", &SimConfig::horizon)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("burn_in", &SimConfig::burn_in)
      .def_readwrite("initial_state", &SimConfig::initial_state);

  py::class_<SimStats>(m, "SimStats")
      .def_readonly("avg_cost", &SimStats::avg_cost)
      .def_readonly("avg_aoii", &SimStats::avg_aoii)
      .def_readonly("drop_rate", &SimStats::drop_rate)
      .def_readonly("sample_rate", &SimStats::sample_rate)
      .def_readonly("stderr_cost", &SimStats::stderr_cost)
      .def_readonly("aoii_histogram", &SimStats::aoii_histogram)
      .def_readonly("state_occupancy", &SimStats::state_occupancy)
      .def_readonly("slots_accounted", &SimStats::slots_accounted)
      .def("__eq__", [](const SimStats& a, const SimStats& b) { return a == b; });

  m.def(
      "simulate",
      [](const ModelParams& mp, const std::vector<Action>& policy,
         const SimConfig& config) { return simulate(mp, policy, config); },
      py::arg("params"), py::arg("policy"), py::arg("config") = SimConfig{});
  m.def("empirical_distribution", &empirical_distribution, py::arg("stats"));
}
