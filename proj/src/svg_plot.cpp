#include "silgan/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "silgan/common.hpp"
#include "silgan/sild_io.hpp"

namespace silgan::plot {

namespace {

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                 "#9467bd", "#ff7f0e", "#17becf"};

}  // namespace

std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       std::size_t width, std::size_t height) {
  if (series.empty()) throw param_error("render_svg: no series");
  std::size_t t_total = 0;
  for (const Series& s : series) t_total = std::max(t_total, s.values.size());
  if (t_total < 2) throw param_error("render_svg: series need at least 2 samples");

  const double ml = 46, mr = 12, mt = 28, mb = 34;
  const double pw = static_cast<double>(width) - ml - mr;
  const double ph = static_cast<double>(height) - mt - mb;
  auto sx = [&](std::size_t t) { return ml + pw * static_cast<double>(t) /
                                            static_cast<double>(t_total - 1); };
  auto sy = [&](double v) { return mt + ph * (1.0 - std::clamp(v, 0.0, 1.0)); };

  std::ostringstream svg;
  svg.precision(2);
  svg << std::fixed;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << ml << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">"
      << title << "</text>\n";

  for (int g = 0; g <= 4; ++g) {
    const double y = sy(g / 4.0);
    svg << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw << "\" y2=\""
        << y << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << y + 4
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
        << g / 4.0 << "</text>\n";
  }
  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 8
      << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">t (s)"
      << "</text>\n";

  double legend_x = ml;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const Series& s = series[i];
    if (s.values.size() < 2) continue;
    const std::string color =
        s.color.empty() ? kPalette[i % kPalette.size()] : s.color;
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (s.dashed) svg << " stroke-dasharray=\"5,4\"";
    svg << " points=\"";
    for (std::size_t t = 0; t < s.values.size(); ++t)
      svg << sx(t) << ',' << sy(s.values[t]) << (t + 1 < s.values.size() ? " " : "");
    svg << "\"/>\n";
    svg << "<text x=\"" << legend_x << "\" y=\"" << height - 20
        << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"" << color << "\">"
        << s.label << "</text>\n";
    legend_x += 7.0 * (s.label.size() + 2);
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_svg(const std::string& path, const std::vector<Series>& series,
               const std::string& title, std::size_t width, std::size_t height) {
  io::write_file(path, render_svg(series, title, width, height));
}

}  // namespace silgan::plot
