#include "pdhp/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pdhp {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 44.0;

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<PlotSeries>& series) {
  std::size_t max_len = 0;
  double y_min = 0.0, y_max = 0.0;
  bool first = true;
  for (const PlotSeries& s : series) {
    max_len = std::max(max_len, s.values.size());
    for (double v : s.values) {
      if (first) {
        y_min = y_max = v;
        first = false;
      }
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (max_len < 2) throw std::runtime_error("svg chart: nothing to plot");
  if (y_max - y_min < 1e-12) {
    y_min -= 1.0;
    y_max += 1.0;
  }
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double step) {
    return kMarginLeft + plot_w * step / static_cast<double>(max_len - 1);
  };
  auto sy = [&](double v) {
    return kMarginTop + plot_h * (1.0 - (v - y_min) / (y_max - y_min));
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write svg: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth
      << "' height='" << kHeight << "' viewBox='0 0 " << kWidth << ' '
      << kHeight << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << kWidth / 2 << "' y='22' text-anchor='middle' "
         "font-family='sans-serif' font-size='15'>"
      << title << "</text>\n";

  // axes
  out << "<line x1='" << kMarginLeft << "' y1='" << kMarginTop << "' x2='"
      << kMarginLeft << "' y2='" << kMarginTop + plot_h
      << "' stroke='black'/>\n";
  out << "<line x1='" << kMarginLeft << "' y1='" << kMarginTop + plot_h
      << "' x2='" << kMarginLeft + plot_w << "' y2='" << kMarginTop + plot_h
      << "' stroke='black'/>\n";
  if (y_min < 0.0 && y_max > 0.0)
    out << "<line x1='" << kMarginLeft << "' y1='" << sy(0.0) << "' x2='"
        << kMarginLeft + plot_w << "' y2='" << sy(0.0)
        << "' stroke='#bbbbbb' stroke-dasharray='4 4'/>\n";
  out << "<text x='" << kMarginLeft - 8 << "' y='" << sy(y_max) + 4
      << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
      << fmt(y_max) << "</text>\n";
  out << "<text x='" << kMarginLeft - 8 << "' y='" << sy(y_min) + 4
      << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
      << fmt(y_min) << "</text>\n";
  out << "<text x='" << kMarginLeft + plot_w << "' y='"
      << kMarginTop + plot_h + 18
      << "' text-anchor='end' font-family='sans-serif' font-size='11'>step "
      << max_len - 1 << "</text>\n";

  double legend_x = kMarginLeft + 12;
  for (const PlotSeries& s : series) {
    if (s.values.size() < 2) continue;
    out << "<polyline fill='none' stroke='" << s.color
        << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.values.size(); ++i)
      out << sx(static_cast<double>(i)) << ',' << sy(s.values[i]) << ' ';
    out << "'/>\n";
    out << "<text x='" << legend_x << "' y='" << kMarginTop + 14
        << "' font-family='sans-serif' font-size='12' fill='" << s.color
        << "'>" << s.label << "</text>\n";
    legend_x += 16.0 + 7.0 * static_cast<double>(s.label.size());
  }
  out << "</svg>\n";
}

}  // namespace pdhp
