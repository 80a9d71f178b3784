#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "aoii/svg.hpp"
#include "aoii/sweep.hpp"

using namespace aoii;

namespace {

SweepSpec penalty_axis_spec(std::vector<double> values) {
  SweepSpec spec;
  spec.base = ModelParams{0.4, 0.3, 1.0, 0.0, 0};
  spec.axis = SweepAxis::p;
  spec.values = std::move(values);
  return spec;
}

}  // namespace

TEST_CASE("axis names round-trip and default grids match the published ranges") {
  for (const SweepAxis a :
       {SweepAxis::p, SweepAxis::S, SweepAxis::q, SweepAxis::q1}) {
    CHECK(axis_from_name(axis_name(a)) == a);
  }
  CHECK_FALSE(axis_from_name("nope").has_value());

  const auto ps = default_axis_values(SweepAxis::p);
  REQUIRE(ps.size() == 20);
  CHECK(ps.front() == 2.0);
  CHECK(ps.back() == 40.0);
  const auto ss = default_axis_values(SweepAxis::S);
  REQUIRE(ss.size() == 20);
  CHECK(ss.front() == 0.5);
  CHECK(ss.back() == 10.0);
  const auto qs = default_axis_values(SweepAxis::q);
  REQUIRE(qs.size() == 19);
  CHECK(qs.front() == 0.05);
  CHECK(qs.back() == 0.95);
  CHECK(default_axis_values(SweepAxis::q1) == qs);
}

TEST_CASE("sweep_point swaps in the axis value and resolves the cap") {
  const SweepSpec spec = penalty_axis_spec({2.0, 20.0});
  const ModelParams at20 = sweep_point(spec, 20.0);
  CHECK(at20.p == 20.0);
  CHECK(at20.q == 0.4);
  CHECK(at20.K == default_age_cap(0.4, 1.0, 20.0));

  SweepSpec pinned = spec;
  pinned.base.K = 30;
  CHECK(sweep_point(pinned, 20.0).K == 30);

  SweepSpec broken = spec;
  broken.base.q1 = 0.0;
  CHECK_THROWS_AS(sweep_point(broken, 2.0), std::invalid_argument);
}

TEST_CASE("run_sweep fills rows in order with the sandwich invariant") {
  SweepSpec spec = penalty_axis_spec({2.0, 10.0, 20.0, 40.0});
  spec.modes.rvi = true;
  const SweepTable table = run_sweep(spec);
  REQUIRE(table.rows.size() == 4);
  CHECK(table.axis == SweepAxis::p);
  int prev_opt = 0;
  for (const SweepRow& r : table.rows) {
    CHECK(r.v_lower <= r.v_opt);
    CHECK(r.v_opt <= r.v_upper);
    CHECK(r.v_opt >= prev_opt);  // nondecreasing in p
    prev_opt = r.v_opt;
    REQUIRE(r.cost_rvi.has_value());
    CHECK(std::fabs(*r.cost_rvi - r.cost_closed_form) <=
          1e-6 * std::max(1.0, r.cost_closed_form));
    CHECK_FALSE(r.cost_sim.has_value());
  }
  CHECK(table.rows[2].v_opt == 6);  // p=20 reference point
}

TEST_CASE("simulate mode attaches seeded Monte Carlo columns") {
  SweepSpec spec = penalty_axis_spec({2.0, 20.0});
  spec.modes.simulate = true;
  SimConfig sim;
  sim.horizon = 200000;
  sim.seed = 5;
  spec.sim = sim;
  const SweepTable table = run_sweep(spec);
  for (const SweepRow& r : table.rows) {
    REQUIRE(r.cost_sim.has_value());
    REQUIRE(r.stderr_sim.has_value());
    CHECK(std::fabs(*r.cost_sim - r.cost_closed_form) <= 5.0 * *r.stderr_sim);
  }
  CHECK(run_sweep(spec).rows[0].cost_sim == table.rows[0].cost_sim);
}

TEST_CASE("run_sweep validates values and points") {
  SweepSpec spec = penalty_axis_spec({});
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
  spec.values = {2.0, 2.0};
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
  spec.values = {2.0, -1.0};
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
  SweepSpec bad = penalty_axis_spec({2.0});
  bad.base.S = 0.0;
  CHECK_THROWS_AS(run_sweep(bad), std::invalid_argument);
}

TEST_CASE("S sweep is nonincreasing on the reference base") {
  SweepSpec spec;
  spec.base = ModelParams{0.4, 0.3, 0.0, 20.0, 0};
  spec.axis = SweepAxis::S;
  spec.values = {0.5, 1.0, 2.0, 5.0, 10.0};
  const SweepTable table = run_sweep(spec);
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    CHECK(table.rows[i].v_opt <= table.rows[i - 1].v_opt);
  }
}

TEST_CASE("sweep CSV round-trips") {
  SweepSpec spec = penalty_axis_spec({2.0, 10.0, 20.0});
  const SweepTable table = run_sweep(spec);
  const std::string text = sweep_csv(table);
  CHECK(text.substr(0, text.find('\n')) == kSweepCsvHeader);

  const SweepTable back = parse_sweep_csv(text);
  CHECK(back.axis == table.axis);
  REQUIRE(back.rows.size() == table.rows.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    CHECK(back.rows[i].axis_value == table.rows[i].axis_value);
    CHECK(back.rows[i].v_lower == table.rows[i].v_lower);
    CHECK(back.rows[i].v_opt == table.rows[i].v_opt);
    CHECK(back.rows[i].v_upper == table.rows[i].v_upper);
    CHECK_FALSE(back.rows[i].cost_rvi.has_value());
  }
  // emitted text is a fixpoint of parse-then-emit
  CHECK(sweep_csv(back) == text);

  // a table whose values print exactly in 12 digits round-trips to equality
  SweepTable exact;
  exact.axis = SweepAxis::q1;
  exact.rows.push_back({0.25, 1, 2, 3, 1.5, 0.125, std::nullopt, std::nullopt});
  const SweepTable exact_back = parse_sweep_csv(sweep_csv(exact));
  CHECK(exact_back == exact);

  CHECK_THROWS_AS(parse_sweep_csv("bogus\n1,2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sweep_csv(std::string(kSweepCsvHeader) + "\np,1,2\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_sweep_csv(std::string(kSweepCsvHeader) + "\nz,1,1,1,1,1,,,\n"),
      std::invalid_argument);
}

TEST_CASE("heatmap single cell and CSV round-trip") {
  const auto cells = run_heatmap(1.0, 2.0, {0.5}, {0.5});
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].v_opt == 1);
  CHECK(std::fabs(cells[0].cost_opt - 2.0 / 3.0) <= 1e-14);

  const auto grid = run_heatmap(1.0, 20.0, {0.3, 0.5}, {0.25, 0.5, 0.75});
  REQUIRE(grid.size() == 6);
  CHECK(grid[0].q == 0.3);
  CHECK(grid[0].q1 == 0.25);
  CHECK(grid[1].q1 == 0.5);  // q1 varies fastest
  for (int i = 0; i < 2; ++i) {  // cost nondecreasing in q1 at fixed q
    CHECK(grid[i * 3 + 0].cost_opt <= grid[i * 3 + 1].cost_opt + 1e-12);
    CHECK(grid[i * 3 + 1].cost_opt <= grid[i * 3 + 2].cost_opt + 1e-12);
  }

  const std::string text = heatmap_csv(grid);
  CHECK(text.substr(0, text.find('\n')) == kHeatmapCsvHeader);
  const auto back = parse_heatmap_csv(text);
  REQUIRE(back.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(back[i].q == grid[i].q);
    CHECK(back[i].q1 == grid[i].q1);
    CHECK(back[i].v_opt == grid[i].v_opt);
  }
  CHECK(heatmap_csv(back) == text);
  CHECK_THROWS_AS(parse_heatmap_csv("q,q1\n"), std::invalid_argument);
  CHECK_THROWS_AS(run_heatmap(1.0, 2.0, {}, {0.5}), std::invalid_argument);
}

TEST_CASE("format_g12 prints 12 significant digits") {
  CHECK(format_g12(0.15) == "0.15");
  CHECK(format_g12(2.0 / 3.0) == "0.666666666667");
  CHECK(format_g12(40.0) == "40");
  CHECK(format_g12(1.194708100377064) == "1.19470810038");
}

TEST_CASE("svg line chart is self-contained and complete") {
  const SweepTable table = run_sweep(penalty_axis_spec({2.0, 10.0, 20.0, 40.0}));
  std::vector<SvgSeries> series(3);
  series[0].name = "v_lower";
  series[1].name = "v_opt";
  series[2].name = "v_upper";
  for (const SweepRow& r : table.rows) {
    series[0].points.emplace_back(r.axis_value, r.v_lower);
    series[1].points.emplace_back(r.axis_value, r.v_opt);
    series[2].points.emplace_back(r.axis_value, r.v_upper);
  }
  const std::string svg = svg_line_chart("threshold vs p", "p", "threshold", series);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("width=\"800\"") != std::string::npos);
  CHECK(svg.find("height=\"600\"") != std::string::npos);
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("v_opt") != std::string::npos);
  CHECK(svg.find("<script") == std::string::npos);
  CHECK(svg.find("href") == std::string::npos);  // no external assets
  CHECK_THROWS_AS(svg_line_chart("t", "x", "y", {}), std::invalid_argument);
}

TEST_CASE("svg heatmap shades every cell") {
  const std::vector<double> xs{0.3, 0.5, 0.7};
  const std::vector<double> ys{0.25, 0.75};
  std::vector<double> vals{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  const std::string svg = svg_heatmap("cost", "q", "q1", xs, ys, vals);
  CHECK(svg.find("<svg") != std::string::npos);
  std::size_t rects = 0;
  for (std::size_t pos = 0; (pos = svg.find("<rect", pos)) != std::string::npos;
       ++pos) {
    ++rects;
  }
  CHECK(rects >= 6);
  CHECK(svg.find("href") == std::string::npos);
  CHECK_THROWS_AS(svg_heatmap("t", "x", "y", xs, ys, {1.0}),
                  std::invalid_argument);
}
