#include "aoii/sweep.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "aoii/solver.hpp"
#include "aoii/threshold.hpp"

namespace aoii {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& field, const char* what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(field, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("bad ") + what + " field: '" + field + "'");
  }
  if (used != field.size()) {
    throw std::invalid_argument(std::string("bad ") + what + " field: '" + field + "'");
  }
  return x;
}

int parse_int(const std::string& field, const char* what) {
  const double x = parse_double(field, what);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x) {
    throw std::invalid_argument(std::string(what) + " is not an integer: '" + field + "'");
  }
  return i;
}

std::optional<double> parse_opt(const std::string& field, const char* what) {
  if (field.empty()) return std::nullopt;
  return parse_double(field, what);
}

std::string opt_g12(const std::optional<double>& x) {
  return x ? format_g12(*x) : std::string();
}

// Splits into lines, dropping a single trailing newline.
std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

}  // namespace

std::string format_g12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::p: return "p";
    case SweepAxis::S: return "S";
    case SweepAxis::q: return "q";
    case SweepAxis::q1: return "q1";
  }
  return "?";
}

std::optional<SweepAxis> axis_from_name(const std::string& name) {
  if (name == "p") return SweepAxis::p;
  if (name == "S") return SweepAxis::S;
  if (name == "q") return SweepAxis::q;
  if (name == "q1") return SweepAxis::q1;
  return std::nullopt;
}

std::vector<double> default_axis_values(SweepAxis axis) {
  std::vector<double> values;
  switch (axis) {
    case SweepAxis::p:
      for (int i = 1; i <= 20; ++i) values.push_back(2.0 * i);
      break;
    case SweepAxis::S:
      for (int i = 1; i <= 20; ++i) values.push_back(i / 2.0);
      break;
    case SweepAxis::q:
    case SweepAxis::q1:
      for (int i = 1; i <= 19; ++i) values.push_back(i / 20.0);
      break;
  }
  return values;
}

ModelParams sweep_point(const SweepSpec& spec, double axis_value) {
  ModelParams mp = spec.base;
  switch (spec.axis) {
    case SweepAxis::p: mp.p = axis_value; break;
    case SweepAxis::S: mp.S = axis_value; break;
    case SweepAxis::q: mp.q = axis_value; break;
    case SweepAxis::q1: mp.q1 = axis_value; break;
  }
  if (spec.base.K == 0) {
    mp.K = default_age_cap(mp.q, mp.S, mp.p);
  }
  require_valid(mp);
  return mp;
}

SweepTable run_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) {
    throw std::invalid_argument("sweep needs at least one axis value");
  }
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i - 1] < spec.values[i])) {
      throw std::invalid_argument("sweep values must be strictly increasing");
    }
  }

  SweepTable table;
  table.axis = spec.axis;
  table.rows.reserve(spec.values.size());
  for (double value : spec.values) {
    const ModelParams mp = sweep_point(spec, value);
    const ThresholdSearchResult search = optimal_threshold(mp);

    SweepRow row;
    row.axis_value = value;
    row.v_lower = search.v_lower;
    row.v_upper = search.v_upper;
    row.v_opt = search.v_opt;
    row.cost_closed_form = search.cost_opt;

    if (spec.modes.rvi) {
      row.cost_rvi = relative_value_iteration(mp, spec.tol).avg_cost;
    }
    if (spec.modes.simulate) {
      const SimConfig config = spec.sim.value_or(SimConfig{});
      const SimStats stats =
          simulate(mp, threshold_policy_actions(mp, search.v_opt), config);
      row.cost_sim = stats.avg_cost;
      row.stderr_sim = stats.stderr_cost;
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string sweep_csv(const SweepTable& table) {
  std::ostringstream out;
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& r : table.rows) {
    out << axis_name(table.axis) << ',' << format_g12(r.axis_value) << ','
        << r.v_lower << ',' << r.v_opt << ',' << r.v_upper << ','
        << format_g12(r.cost_closed_form) << ',' << opt_g12(r.cost_rvi) << ','
        << opt_g12(r.cost_sim) << ',' << opt_g12(r.stderr_sim) << '\n';
  }
  return out.str();
}

SweepTable parse_sweep_csv(const std::string& text) {
  const std::vector<std::string> lines = csv_lines(text);
  if (lines.empty() || lines[0] != kSweepCsvHeader) {
    throw std::invalid_argument("missing or wrong sweep CSV header");
  }
  SweepTable table;
  bool axis_seen = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::vector<std::string> f = split_fields(lines[i]);
    if (f.size() != 9) {
      throw std::invalid_argument("sweep CSV row has " + std::to_string(f.size()) +
                                  " fields, expected 9");
    }
    const std::optional<SweepAxis> axis = axis_from_name(f[0]);
    if (!axis) throw std::invalid_argument("unknown sweep axis '" + f[0] + "'");
    if (!axis_seen) {
      table.axis = *axis;
      axis_seen = true;
    } else if (*axis != table.axis) {
      throw std::invalid_argument("sweep CSV mixes axes");
    }
    SweepRow row;
    row.axis_value = parse_double(f[1], "axis_value");
    row.v_lower = parse_int(f[2], "v_lower");
    row.v_opt = parse_int(f[3], "v_opt");
    row.v_upper = parse_int(f[4], "v_upper");
    row.cost_closed_form = parse_double(f[5], "cost_closed_form");
    row.cost_rvi = parse_opt(f[6], "cost_rvi");
    row.cost_sim = parse_opt(f[7], "cost_sim");
    row.stderr_sim = parse_opt(f[8], "stderr_sim");
    table.rows.push_back(row);
  }
  return table;
}

std::vector<HeatmapCell> run_heatmap(double S, double p,
                                     const std::vector<double>& qs,
                                     const std::vector<double>& q1s) {
  if (qs.empty() || q1s.empty()) {
    throw std::invalid_argument("heatmap needs nonempty q and q1 grids");
  }
  std::vector<HeatmapCell> cells;
  cells.reserve(qs.size() * q1s.size());
  for (double q : qs) {
    for (double q1 : q1s) {
      const ModelParams mp = make_params(q, q1, S, p);
      require_valid(mp);
      const ThresholdSearchResult search = optimal_threshold(mp);
      cells.push_back({q, q1, search.v_opt, search.cost_opt});
    }
  }
  return cells;
}

std::string heatmap_csv(const std::vector<HeatmapCell>& cells) {
  std::ostringstream out;
  out << kHeatmapCsvHeader << '\n';
  for (const HeatmapCell& c : cells) {
    out << format_g12(c.q) << ',' << format_g12(c.q1) << ',' << c.v_opt << ','
        << format_g12(c.cost_opt) << '\n';
  }
  return out.str();
}

std::vector<HeatmapCell> parse_heatmap_csv(const std::string& text) {
  const std::vector<std::string> lines = csv_lines(text);
  if (lines.empty() || lines[0] != kHeatmapCsvHeader) {
    throw std::invalid_argument("missing or wrong heatmap CSV header");
  }
  std::vector<HeatmapCell> cells;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::vector<std::string> f = split_fields(lines[i]);
    if (f.size() != 4) {
      throw std::invalid_argument("heatmap CSV row has " + std::to_string(f.size()) +
                                  " fields, expected 4");
    }
    HeatmapCell c;
    c.q = parse_double(f[0], "q");
    c.q1 = parse_double(f[1], "q1");
    c.v_opt = parse_int(f[2], "v_opt");
    c.cost_opt = parse_double(f[3], "cost_opt");
    cells.push_back(c);
  }
  return cells;
}

}  // namespace aoii
