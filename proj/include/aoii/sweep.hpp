#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aoii/model.hpp"
#include "aoii/simulate.hpp"

namespace aoii {

enum class SweepAxis { p, S, q, q1 };

const char* axis_name(SweepAxis axis);
std::optional<SweepAxis> axis_from_name(const std::string& name);

// Grids used when the caller does not supply values:
//   p : 2, 4, ..., 40        S : 0.5, 1, ..., 10
//   q : 0.05, 0.10, ..., 0.95 (same for q1)
std::vector<double> default_axis_values(SweepAxis axis);

// Which columns get filled. Bounds and the closed-form search always run —
// the row schema carries them unconditionally — so only the expensive modes
// are real switches.
struct SweepModes {
  bool bounds = true;
  bool closed_form = true;
  bool rvi = false;
  bool simulate = false;

  friend bool operator==(const SweepModes&, const SweepModes&) = default;
};

struct SweepSpec {
  ModelParams base;  // base.K == 0 means: pick default_age_cap per point
  SweepAxis axis = SweepAxis::p;
  std::vector<double> values;  // strictly increasing
  SweepModes modes;
  std::optional<SimConfig> sim;  // settings for modes.simulate
  double tol = 1e-10;            // RVI tolerance for modes.rvi
};

struct SweepRow {
  double axis_value = 0.0;
  int v_lower = 0;
  int v_opt = 0;
  int v_upper = 0;
  double cost_closed_form = 0.0;
  std::optional<double> cost_rvi;
  std::optional<double> cost_sim;
  std::optional<double> stderr_sim;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepTable {
  SweepAxis axis = SweepAxis::p;
  std::vector<SweepRow> rows;

  friend bool operator==(const SweepTable&, const SweepTable&) = default;
};

// The base instance with the axis field replaced (and K resolved).
ModelParams sweep_point(const SweepSpec& spec, double axis_value);

// One row per value, in order. Throws std::invalid_argument if any swept
// point is invalid or the values are not strictly increasing; NonConvergence
// from the RVI mode propagates.
SweepTable run_sweep(const SweepSpec& spec);

// CSV with the fixed header below; doubles use 12 significant digits and
// absent optionals print as empty fields.
inline constexpr const char* kSweepCsvHeader =
    "axis,axis_value,v_lower,v_opt,v_upper,cost_closed_form,cost_rvi,"
    "cost_sim,stderr_sim";

std::string sweep_csv(const SweepTable& table);
SweepTable parse_sweep_csv(const std::string& text);

struct HeatmapCell {
  double q = 0.0;
  double q1 = 0.0;
  int v_opt = 0;
  double cost_opt = 0.0;

  friend bool operator==(const HeatmapCell&, const HeatmapCell&) = default;
};

// Closed-form optimum on the q x q1 grid at fixed S, p; cells ordered with
// q1 fastest. Invalid cells throw std::invalid_argument.
std::vector<HeatmapCell> run_heatmap(double S, double p,
                                     const std::vector<double>& qs,
                                     const std::vector<double>& q1s);

inline constexpr const char* kHeatmapCsvHeader = "q,q1,v_opt,cost_opt";

std::string heatmap_csv(const std::vector<HeatmapCell>& cells);
std::vector<HeatmapCell> parse_heatmap_csv(const std::string& text);

// %.12g, shared by every CSV emitter so files stay parse/emit fixpoints.
std::string format_g12(double x);

}  // namespace aoii
