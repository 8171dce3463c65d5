#pragma once

// Minimal static SVG line charts for experiment results. The CSV tables are
// the source of truth; these plots are a convenience view only.

#include <string>
#include <vector>

namespace selci {

struct SvgSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<SvgSeries>& series);

}  // namespace selci
