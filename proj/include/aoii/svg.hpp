#pragma once

#include <string>
#include <vector>

namespace aoii {

struct SvgSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

// Self-contained 800x600 SVG: one polyline per series, axis ticks, legend.
// Reporting convenience only — no external assets, scripts, or styles.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<SvgSeries>& series);

// Self-contained 800x600 SVG heatmap of values[i*ys.size()+j] at (xs[i], ys[j]),
// shaded between the grid's min and max with a labeled color bar.
std::string svg_heatmap(const std::string& title, const std::string& x_label,
                        const std::string& y_label, const std::vector<double>& xs,
                        const std::vector<double>& ys,
                        const std::vector<double>& values);

}  // namespace aoii
