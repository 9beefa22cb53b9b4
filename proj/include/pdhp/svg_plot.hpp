#pragma once

#include <string>
#include <vector>

namespace pdhp {

// One polyline: y values against the step index.
struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> values;
};

// Minimal SVG line chart (states and controls vs step). Presentation only;
// never load-bearing.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<PlotSeries>& series);

}  // namespace pdhp
