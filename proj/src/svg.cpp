#include "aoii/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aoii/sweep.hpp"  // format_g12

namespace aoii {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 770.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 540.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                "#9467bd", "#ff7f0e", "#17becf"};

struct Range {
  double lo = 0.0;
  double hi = 1.0;
  double span() const { return hi - lo; }
};

Range pad(double lo, double hi) {
  if (!(lo < hi)) {  // flat or single-point data still needs a window
    const double eps = std::max(1.0, std::fabs(lo)) * 0.05;
    return {lo - eps, hi + eps};
  }
  const double margin = (hi - lo) * 0.05;
  return {lo - margin, hi + margin};
}

// Round tick step: 1/2/5 times a power of ten, aiming for ~6 intervals.
double tick_step(const Range& r) {
  const double raw = r.span() / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double step = 10.0;
  if (frac <= 1.0) step = 1.0;
  else if (frac <= 2.0) step = 2.0;
  else if (frac <= 5.0) step = 5.0;
  return step * mag;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

void open_svg(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2
      << "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">" << escape(title)
      << "</text>\n";
}

void axes_and_labels(std::ostringstream& out, const std::string& x_label,
                     const std::string& y_label) {
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight
      << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kBottom << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 38
      << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(x_label)
      << "</text>\n"
      << "<text x=\"20\" y=\"" << (kTop + kBottom) / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
      << (kTop + kBottom) / 2 << ")\">" << escape(y_label) << "</text>\n";
}

void x_ticks(std::ostringstream& out, const Range& rx) {
  const double step = tick_step(rx);
  for (double t = std::ceil(rx.lo / step) * step; t <= rx.hi + step * 1e-9;
       t += step) {
    const double x = kLeft + (t - rx.lo) / rx.span() * (kRight - kLeft);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << kBottom << "\" x2=\""
        << num(x) << "\" y2=\"" << kBottom + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << num(x) << "\" y=\"" << kBottom + 20
        << "\" text-anchor=\"middle\" font-size=\"12\">" << format_g12(t)
        << "</text>\n";
  }
}

void y_ticks(std::ostringstream& out, const Range& ry) {
  const double step = tick_step(ry);
  for (double t = std::ceil(ry.lo / step) * step; t <= ry.hi + step * 1e-9;
       t += step) {
    const double y = kBottom - (t - ry.lo) / ry.span() * (kBottom - kTop);
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(y) << "\" x2=\""
        << kLeft << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\" font-size=\"12\">" << format_g12(t)
        << "</text>\n";
  }
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<SvgSeries>& series) {
  double xlo = 0.0, xhi = 1.0, ylo = 0.0, yhi = 1.0;
  bool any = false;
  for (const SvgSeries& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!any) {
        xlo = xhi = x;
        ylo = yhi = y;
        any = true;
      } else {
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
      }
    }
  }
  if (!any) throw std::invalid_argument("line chart needs at least one point");
  const Range rx = pad(xlo, xhi);
  const Range ry = pad(ylo, yhi);

  std::ostringstream out;
  open_svg(out, title);
  axes_and_labels(out, x_label, y_label);
  x_ticks(out, rx);
  y_ticks(out, ry);

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[i].points) {
      out << num(kLeft + (x - rx.lo) / rx.span() * (kRight - kLeft)) << ','
          << num(kBottom - (y - ry.lo) / ry.span() * (kBottom - kTop)) << ' ';
    }
    out << "\"/>\n";
    const double ly = kTop + 16.0 + 18.0 * static_cast<double>(i);
    out << "<line x1=\"" << kRight - 150 << "\" y1=\"" << ly << "\" x2=\""
        << kRight - 120 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kRight - 114 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\">" << escape(series[i].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string svg_heatmap(const std::string& title, const std::string& x_label,
                        const std::string& y_label, const std::vector<double>& xs,
                        const std::vector<double>& ys,
                        const std::vector<double>& values) {
  if (xs.empty() || ys.empty() || values.size() != xs.size() * ys.size()) {
    throw std::invalid_argument("heatmap needs xs.size()*ys.size() values");
  }
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double span = hi > lo ? hi - lo : 1.0;

  const double map_right = kRight - 60.0;  // leave room for the color bar
  const double cw = (map_right - kLeft) / static_cast<double>(xs.size());
  const double ch = (kBottom - kTop) / static_cast<double>(ys.size());

  std::ostringstream out;
  open_svg(out, title);
  axes_and_labels(out, x_label, y_label);

  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double t = (values[i * ys.size() + j] - lo) / span;
      // blue (cold) to red (hot)
      const int r = static_cast<int>(std::lround(40 + 215 * t));
      const int g = static_cast<int>(std::lround(60 + 40 * (1 - t)));
      const int b = static_cast<int>(std::lround(40 + 215 * (1 - t)));
      const double x = kLeft + cw * static_cast<double>(i);
      const double y = kBottom - ch * static_cast<double>(j + 1);
      out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
          << num(cw) << "\" height=\"" << num(ch) << "\" fill=\"rgb(" << r << ','
          << g << ',' << b << ")\"/>\n";
    }
  }

  // Tick labels on first/last grid points keep the axes readable for any grid.
  out << "<text x=\"" << kLeft << "\" y=\"" << kBottom + 20
      << "\" text-anchor=\"middle\" font-size=\"12\">" << format_g12(xs.front())
      << "</text>\n"
      << "<text x=\"" << map_right << "\" y=\"" << kBottom + 20
      << "\" text-anchor=\"middle\" font-size=\"12\">" << format_g12(xs.back())
      << "</text>\n"
      << "<text x=\"" << kLeft - 8 << "\" y=\"" << kBottom + 4
      << "\" text-anchor=\"end\" font-size=\"12\">" << format_g12(ys.front())
      << "</text>\n"
      << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + 12
      << "\" text-anchor=\"end\" font-size=\"12\">" << format_g12(ys.back())
      << "</text>\n";

  // Color bar.
  const double bar_x = map_right + 20.0;
  const int strips = 64;
  const double sh = (kBottom - kTop) / strips;
  for (int k = 0; k < strips; ++k) {
    const double t = (static_cast<double>(k) + 0.5) / strips;
    const int r = static_cast<int>(std::lround(40 + 215 * t));
    const int g = static_cast<int>(std::lround(60 + 40 * (1 - t)));
    const int b = static_cast<int>(std::lround(40 + 215 * (1 - t)));
    out << "<rect x=\"" << num(bar_x) << "\" y=\"" << num(kBottom - sh * (k + 1))
        << "\" width=\"18\" height=\"" << num(sh + 0.5) << "\" fill=\"rgb(" << r
        << ',' << g << ',' << b << ")\"/>\n";
  }
  out << "<text x=\"" << num(bar_x + 22) << "\" y=\"" << kBottom + 4
      << "\" font-size=\"12\">" << format_g12(lo) << "</text>\n"
      << "<text x=\"" << num(bar_x + 22) << "\" y=\"" << kTop + 12
      << "\" font-size=\"12\">" << format_g12(hi) << "</text>\n"
      << "</svg>\n";
  return out.str();
}

}  // namespace aoii
