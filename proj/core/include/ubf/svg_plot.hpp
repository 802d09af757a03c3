#pragma once

#include <array>
#include <string>
#include <vector>

namespace ubf {

/// Minimal static SVG line plots, enough for the run artifacts.
struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;
  /// Circles drawn in data coordinates (cx, cy, radius).
  std::vector<std::array<double, 3>> circles;
  /// Point markers in data coordinates (x, y), e.g. start and goal.
  std::vector<std::array<double, 2>> markers;
  bool equal_aspect = false;
  int width = 640;
  int height = 480;
};

std::string render_svg(const SvgPlot& plot);
void write_svg(const SvgPlot& plot, const std::string& path);

}  // namespace ubf
