#pragma once

// Tiny SVG line charts for the experiment outputs. CSV is the contract;
// these plots are a convenience behind --svg.

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gossip/csv.hpp"

namespace gossip::plot {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

inline void write_line_chart(std::ostream& out, const std::string& title,
                             const std::string& x_label, const std::string& y_label,
                             const std::vector<Series>& series, bool log_y = false) {
  constexpr double width = 800, height = 520;
  constexpr double left = 80, right = 30, top = 50, bottom = 60;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!log_y || y > 0.0);
  };
  auto map_y = [&](double y) { return log_y ? std::log10(y) : y; };

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      if (!usable(x, y)) continue;
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, map_y(y));
      y_max = std::max(y_max, map_y(y));
    }
  if (!(x_min < x_max)) x_max = x_min + 1;
  if (!(y_min < y_max)) y_max = y_min + 1;

  auto px = [&](double x) {
    return left + (x - x_min) / (x_max - x_min) * (width - left - right);
  };
  auto py = [&](double y) {
    return height - bottom - (map_y(y) - y_min) / (y_max - y_min) * (height - top - bottom);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " << height / 2
      << ")\">" << y_label << (log_y ? " (log scale)" : "") << "</text>\n";

  // axes and ticks
  out << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right
      << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << height - bottom << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = x_min + (x_max - x_min) * i / 5.0;
    const double fy = y_min + (y_max - y_min) * i / 5.0;
    out << "<text x=\"" << px(fx) << "\" y=\"" << height - bottom + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << csv::format_double(fx) << "</text>\n";
    const double label_y = log_y ? std::pow(10.0, fy) : fy;
    out << "<text x=\"" << left - 8 << "\" y=\""
        << height - bottom - (fy - y_min) / (y_max - y_min) * (height - top - bottom) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">"
        << csv::format_double(log_y ? label_y : fy) << "</text>\n";
  }

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
    for (auto [x, y] : series[s].points)
      if (usable(x, y)) out << px(x) << ',' << py(y) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << width - right - 6 << "\" y=\"" << top + 16 * (s + 1)
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << series[s].label
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace gossip::plot
