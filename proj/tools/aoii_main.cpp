// Command-line front end: solve / threshold / sweep / heatmap / simulate.
// Exit codes: 0 ok, 2 invalid input, 3 solver non-convergence.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoii/model.hpp"
#include "aoii/simulate.hpp"
#include "aoii/solver.hpp"
#include "aoii/svg.hpp"
#include "aoii/sweep.hpp"
#include "aoii/threshold.hpp"

namespace {

using nlohmann::json;

// Relative output paths land in $AOII_OUT_DIR when it is set.
std::filesystem::path resolve_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("AOII_OUT_DIR")) {
      p = std::filesystem::path(dir) / p;
    }
  }
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path());
  }
  return p;
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p = resolve_out(path);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file " + p.string());
  out << content;
  if (!out.flush()) throw std::invalid_argument("failed writing " + p.string());
  std::cout << "wrote " << p.string() << "\n";
}

struct ParamFlags {
  double q = 0.0;
  double q1 = 0.0;
  double S = 0.0;
  double p = 0.0;
  int K = 0;  // 0 = pick default_age_cap
  std::string config_path;

  aoii::ModelParams params() const {
    return aoii::make_params(q, q1, S, p,
                             K > 0 ? std::optional<int>(K) : std::nullopt);
  }
};

void add_param_flags(CLI::App* cmd, ParamFlags& f) {
  cmd->add_option("--q", f.q, "machine flip probability, in (0,1)");
  cmd->add_option("--q1", f.q1, "job completion probability, in (0,1]");
  cmd->add_option("--S", f.S, "age cost slope, > 0");
  cmd->add_option("--p", f.p, "drop penalty, > 0");
  cmd->add_option("--K", f.K, "age cap (0 = automatic)");
  cmd->add_option("--config", f.config_path,
                  "flat key=value config file; explicit flags win");
}

// "key=value" lines; blank lines and #-comments skipped.
std::vector<std::pair<std::string, std::string>> config_entries(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int line_no = 0;
  const auto trim = [](const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": expected key=value");
    }
    entries.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
  return entries;
}

double config_number(const std::pair<std::string, std::string>& entry) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(entry.second, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != entry.second.size()) {
    throw std::invalid_argument("config value " + entry.first + "=" +
                                entry.second + " is not a number");
  }
  return value;
}

// Config fills in whatever the command line left unset.
void apply_param_config(const CLI::App* cmd, ParamFlags& f) {
  if (f.config_path.empty()) return;
  for (const auto& entry : config_entries(f.config_path)) {
    double* slot = nullptr;
    if (entry.first == "q") {
      slot = &f.q;
    } else if (entry.first == "q1") {
      slot = &f.q1;
    } else if (entry.first == "S") {
      slot = &f.S;
    } else if (entry.first == "p") {
      slot = &f.p;
    } else if (entry.first != "K") {
      throw std::invalid_argument("unknown config key '" + entry.first + "'");
    }
    if (cmd->count("--" + entry.first) > 0) continue;  // flags win
    const double value = config_number(entry);
    if (slot) {
      *slot = value;
    } else {
      f.K = static_cast<int>(value);
    }
  }
}

std::string action_name(aoii::Action a) {
  return a == aoii::Action::sample ? "sample" : "idle";
}

void print_policy(const aoii::ModelParams& mp, const std::vector<aoii::Action>& policy) {
  std::cout << "policy:\n";
  std::cout << "  (0,0) synced : " << action_name(policy[0]) << "\n";
  std::cout << "  (0,1) serving: " << action_name(policy[1]) << "\n";
  int run_start = 1;
  for (int v = 1; v <= mp.K; ++v) {
    const bool last = v == mp.K;
    const aoii::Action here = policy[v + 1];
    if (!last && policy[v + 2] == here) continue;
    std::cout << "  ages " << run_start << ".." << v << " : " << action_name(here)
              << "\n";
    run_start = v + 1;
  }
}

int cmd_solve(const ParamFlags& flags, double tol, long max_iter, bool as_json,
              const std::string& out) {
  const aoii::ModelParams mp = flags.params();
  aoii::require_valid(mp);
  const aoii::SolveResult r = aoii::relative_value_iteration(mp, tol, max_iter);

  json j{{"q", mp.q},
         {"q1", mp.q1},
         {"S", mp.S},
         {"p", mp.p},
         {"K", mp.K},
         {"avg_cost", r.avg_cost},
         {"iterations", r.iterations},
         {"residual", r.residual}};
  if (r.threshold) {
    j["threshold"] = *r.threshold;
  } else {
    j["threshold"] = nullptr;
  }
  json policy = json::array();
  for (aoii::Action a : r.policy) policy.push_back(action_name(a));
  j["policy"] = policy;

  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "avg_cost " << aoii::format_g12(r.avg_cost) << "\n";
    if (r.threshold) {
      std::cout << "threshold " << *r.threshold << "\n";
    } else {
      std::cout << "threshold none (policy is not threshold-shaped)\n";
    }
    std::cout << "iterations " << r.iterations << "  residual "
              << aoii::format_g12(r.residual) << "\n";
    print_policy(mp, r.policy);
  }
  if (!out.empty()) write_file(out, j.dump(2) + "\n");
  return 0;
}

int cmd_threshold(const ParamFlags& flags) {
  const aoii::ModelParams mp = flags.params();
  aoii::require_valid(mp);
  const aoii::ThresholdSearchResult r = aoii::optimal_threshold(mp);
  std::cout << "bounds [" << r.v_lower << ", " << r.v_upper << "]\n";
  std::cout << "v_opt " << r.v_opt << "\n";
  std::cout << "cost " << aoii::format_g12(r.cost_opt) << "\n";
  std::cout << "cost table:\n";
  for (const auto& [v, cost] : r.cost_table) {
    std::cout << "  " << v << "  " << aoii::format_g12(cost) << "\n";
  }
  return 0;
}

int cmd_sweep(const ParamFlags& flags, const std::string& axis_flag,
              std::vector<double> values, bool rvi, bool simulate, double tol,
              const aoii::SimConfig& sim, const std::string& out,
              const std::string& svg) {
  const std::optional<aoii::SweepAxis> axis = aoii::axis_from_name(axis_flag);
  if (!axis) throw std::invalid_argument("unknown axis '" + axis_flag + "'");

  aoii::SweepSpec spec;
  spec.base = {flags.q, flags.q1, flags.S, flags.p, flags.K > 0 ? flags.K : 0};
  spec.axis = *axis;
  spec.values = values.empty() ? aoii::default_axis_values(*axis) : values;
  spec.modes.rvi = rvi;
  spec.modes.simulate = simulate;
  spec.tol = tol;
  if (simulate) spec.sim = sim;

  const aoii::SweepTable table = aoii::run_sweep(spec);
  write_file(out, aoii::sweep_csv(table));

  if (!svg.empty()) {
    std::vector<aoii::SvgSeries> series(3);
    series[0].name = "v_lower";
    series[1].name = "v_opt";
    series[2].name = "v_upper";
    for (const aoii::SweepRow& r : table.rows) {
      series[0].points.emplace_back(r.axis_value, r.v_lower);
      series[1].points.emplace_back(r.axis_value, r.v_opt);
      series[2].points.emplace_back(r.axis_value, r.v_upper);
    }
    write_file(svg, aoii::svg_line_chart("threshold vs " + axis_flag, axis_flag,
                                         "threshold age", series));
  }
  return 0;
}

int cmd_heatmap(double S, double p, std::vector<double> qs,
                std::vector<double> q1s, const std::string& out,
                const std::string& svg) {
  if (qs.empty()) qs = aoii::default_axis_values(aoii::SweepAxis::q);
  if (q1s.empty()) q1s = aoii::default_axis_values(aoii::SweepAxis::q1);
  const std::vector<aoii::HeatmapCell> cells = aoii::run_heatmap(S, p, qs, q1s);
  write_file(out, aoii::heatmap_csv(cells));

  if (!svg.empty()) {
    std::vector<double> costs;
    costs.reserve(cells.size());
    for (const aoii::HeatmapCell& c : cells) costs.push_back(c.cost_opt);
    write_file(svg, aoii::svg_heatmap("optimal threshold cost", "q", "q1", qs,
                                      q1s, costs));
  }
  return 0;
}

int cmd_simulate(const ParamFlags& flags, int v_th, const aoii::SimConfig& sim,
                 const std::string& out) {
  const aoii::ModelParams mp = flags.params();
  aoii::require_valid(mp);
  const std::vector<aoii::Action> policy = aoii::threshold_policy_actions(mp, v_th);
  const aoii::SimStats stats = aoii::simulate(mp, policy, sim);

  std::cout << "avg_cost " << aoii::format_g12(stats.avg_cost) << "\n";
  std::cout << "avg_aoii " << aoii::format_g12(stats.avg_aoii) << "\n";
  std::cout << "drop_rate " << aoii::format_g12(stats.drop_rate) << "\n";
  std::cout << "sample_rate " << aoii::format_g12(stats.sample_rate) << "\n";
  std::cout << "stderr_cost " << aoii::format_g12(stats.stderr_cost) << "\n";
  std::cout << "slots " << stats.slots_accounted << "\n";

  if (!out.empty()) {
    std::string csv = "v,fraction\n";
    for (std::size_t v = 0; v < stats.aoii_histogram.size(); ++v) {
      csv += std::to_string(v) + "," + aoii::format_g12(stats.aoii_histogram[v]) +
             "\n";
    }
    write_file(out, csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"threshold-policy toolkit for the machine-tracking control problem"};
  app.require_subcommand(1);

  ParamFlags solve_flags, thr_flags, sweep_flags, sim_flags;
  double solve_tol = 1e-10, sweep_tol = 1e-10;
  long solve_max_iter = 1000000;
  bool solve_json = false;
  std::string solve_out;

  CLI::App* solve = app.add_subcommand("solve", "average-cost optimal policy");
  add_param_flags(solve, solve_flags);
  solve->add_option("--tol", solve_tol, "iteration stopping tolerance");
  solve->add_option("--max-iter", solve_max_iter, "iteration budget before giving up");
  solve->add_flag("--json", solve_json, "print machine-readable JSON");
  solve->add_option("--out", solve_out, "also write the JSON to this file");

  CLI::App* thr = app.add_subcommand("threshold", "closed-form threshold search");
  add_param_flags(thr, thr_flags);

  CLI::App* sweep = app.add_subcommand("sweep", "sweep one parameter, write CSV");
  std::string sweep_axis;
  std::vector<double> sweep_values;
  bool sweep_rvi = false, sweep_sim = false;
  aoii::SimConfig sweep_sim_cfg;
  std::string sweep_out = "sweep.csv", sweep_svg;
  add_param_flags(sweep, sweep_flags);
  sweep->add_option("--axis", sweep_axis, "one of p, S, q, q1")->required();
  sweep->add_option("--values", sweep_values,
                    "axis grid (default: built-in grid for the axis)");
  sweep->add_flag("--rvi", sweep_rvi, "also solve each point by iteration");
  sweep->add_flag("--simulate", sweep_sim, "also simulate each point's optimum");
  sweep->add_option("--tol", sweep_tol, "iteration tolerance for --rvi");
  sweep->add_option("--seed", sweep_sim_cfg.seed, "simulation seed");
  sweep->add_option("--horizon", sweep_sim_cfg.horizon, "simulation slots");
  sweep->add_option("--burn-in", sweep_sim_cfg.burn_in, "excluded leading slots");
  sweep->add_option("--out", sweep_out, "CSV path (default sweep.csv)");
  sweep->add_option("--svg", sweep_svg, "also write an SVG line chart here");

  CLI::App* heat = app.add_subcommand("heatmap", "q x q1 grid of optima, write CSV");
  double heat_S = 0.0, heat_p = 0.0;
  std::vector<double> heat_qs, heat_q1s;
  std::string heat_out = "heatmap.csv", heat_svg;
  heat->add_option("--S", heat_S, "age cost slope, > 0");
  heat->add_option("--p", heat_p, "drop penalty, > 0");
  heat->add_option("--qs", heat_qs, "q grid (default: built-in)");
  heat->add_option("--q1s", heat_q1s, "q1 grid (default: built-in)");
  heat->add_option("--out", heat_out, "CSV path (default heatmap.csv)");
  heat->add_option("--svg", heat_svg, "also write an SVG heatmap here");
  std::string heat_config;
  heat->add_option("--config", heat_config,
                   "flat key=value config file (S, p); explicit flags win");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo run of a threshold policy");
  int sim_vth = 1;
  aoii::SimConfig sim_cfg;
  std::string sim_out;
  add_param_flags(sim, sim_flags);
  sim->add_option("--vth", sim_vth, "threshold age to simulate")->required();
  sim->add_option("--seed", sim_cfg.seed, "RNG seed");
  sim->add_option("--horizon", sim_cfg.horizon, "total slots");
  sim->add_option("--burn-in", sim_cfg.burn_in, "excluded leading slots");
  sim->add_option("--out", sim_out, "write the age histogram CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 2;
  }

  try {
    if (solve->parsed()) {
      apply_param_config(solve, solve_flags);
      return cmd_solve(solve_flags, solve_tol, solve_max_iter, solve_json, solve_out);
    }
    if (thr->parsed()) {
      apply_param_config(thr, thr_flags);
      return cmd_threshold(thr_flags);
    }
    if (sweep->parsed()) {
      apply_param_config(sweep, sweep_flags);
      return cmd_sweep(sweep_flags, sweep_axis, sweep_values, sweep_rvi,
                       sweep_sim, sweep_tol, sweep_sim_cfg, sweep_out, sweep_svg);
    }
    if (heat->parsed()) {
      if (!heat_config.empty()) {
        for (const auto& entry : config_entries(heat_config)) {
          if (entry.first != "S" && entry.first != "p") {
            throw std::invalid_argument("unknown config key '" + entry.first + "'");
          }
          if (heat->count("--" + entry.first) > 0) continue;
          (entry.first == "S" ? heat_S : heat_p) = config_number(entry);
        }
      }
      return cmd_heatmap(heat_S, heat_p, heat_qs, heat_q1s, heat_out, heat_svg);
    }
    if (sim->parsed()) {
      apply_param_config(sim, sim_flags);
      return cmd_simulate(sim_flags, sim_vth, sim_cfg, sim_out);
    }
  } catch (const aoii::NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
