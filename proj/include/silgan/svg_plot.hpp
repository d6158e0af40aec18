#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace silgan::plot {

struct Series {
  std::string label;
  std::vector<float> values;  // normalized to [0,1]
  std::string color;          // css color; picked from a palette when empty
  bool dashed = false;
};

/// Renders normalized time series as an SVG line chart.
std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       std::size_t width = 900, std::size_t height = 280);

void write_svg(const std::string& path, const std::vector<Series>& series,
               const std::string& title, std::size_t width = 900,
               std::size_t height = 280);

}  // namespace silgan::plot
