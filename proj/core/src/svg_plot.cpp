#include "ubf/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ubf {

namespace {

struct Bounds {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  void grow(double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string render_svg(const SvgPlot& plot) {
  constexpr double kMargin = 50.0;
  Bounds b;
  for (const auto& s : plot.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) b.grow(s.x[i], s.y[i]);
  }
  for (const auto& c : plot.circles) {
    b.grow(c[0] - c[2], c[1] - c[2]);
    b.grow(c[0] + c[2], c[1] + c[2]);
  }
  for (const auto& m : plot.markers) b.grow(m[0], m[1]);
  if (!std::isfinite(b.xmin)) b = {0.0, 1.0, 0.0, 1.0};
  if (b.xmax == b.xmin) {
    b.xmin -= 0.5;
    b.xmax += 0.5;
  }
  if (b.ymax == b.ymin) {
    b.ymin -= 0.5;
    b.ymax += 0.5;
  }
  const double pad_x = 0.05 * (b.xmax - b.xmin);
  const double pad_y = 0.05 * (b.ymax - b.ymin);
  b.xmin -= pad_x;
  b.xmax += pad_x;
  b.ymin -= pad_y;
  b.ymax += pad_y;

  const double plot_w = plot.width - 2.0 * kMargin;
  const double plot_h = plot.height - 2.0 * kMargin;
  double sx = plot_w / (b.xmax - b.xmin);
  double sy = plot_h / (b.ymax - b.ymin);
  if (plot.equal_aspect) sx = sy = std::min(sx, sy);
  auto px = [&](double x) { return kMargin + (x - b.xmin) * sx; };
  auto py = [&](double y) { return plot.height - kMargin - (y - b.ymin) * sy; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width
      << "\" height=\"" << plot.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << plot.width / 2 << "\" y=\"20\" text-anchor=\"middle\""
      << " font-family=\"sans-serif\" font-size=\"14\">" << plot.title
      << "</text>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << plot.height - kMargin
      << "\" x2=\"" << plot.width - kMargin << "\" y2=\""
      << plot.height - kMargin << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\""
      << kMargin << "\" y2=\"" << plot.height - kMargin
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << plot.width / 2 << "\" y=\"" << plot.height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"12\">" << plot.x_label << "</text>\n";
  svg << "<text x=\"15\" y=\"" << plot.height / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\""
      << " font-size=\"12\" transform=\"rotate(-90 15 " << plot.height / 2
      << ")\">" << plot.y_label << "</text>\n";
  // axis extents
  svg << "<text x=\"" << kMargin << "\" y=\"" << plot.height - kMargin + 16
      << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(b.xmin)
      << "</text>\n";
  svg << "<text x=\"" << plot.width - kMargin << "\" y=\""
      << plot.height - kMargin + 16
      << "\" text-anchor=\"end\" font-family=\"sans-serif\""
      << " font-size=\"10\">" << fmt(b.xmax) << "</text>\n";
  svg << "<text x=\"" << kMargin - 4 << "\" y=\"" << plot.height - kMargin
      << "\" text-anchor=\"end\" font-family=\"sans-serif\""
      << " font-size=\"10\">" << fmt(b.ymin) << "</text>\n";
  svg << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\""
      << " font-size=\"10\">" << fmt(b.ymax) << "</text>\n";

  for (const auto& c : plot.circles) {
    svg << "<circle cx=\"" << fmt(px(c[0])) << "\" cy=\"" << fmt(py(c[1]))
        << "\" r=\"" << fmt(c[2] * sx)
        << "\" fill=\"#cccccc\" stroke=\"#666666\"/>\n";
  }
  for (const auto& s : plot.series) {
    if (s.x.empty()) continue;
    svg << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) svg << " ";
      svg << fmt(px(s.x[i])) << "," << fmt(py(s.y[i]));
    }
    svg << "\"/>\n";
  }
  for (const auto& m : plot.markers) {
    svg << "<circle cx=\"" << fmt(px(m[0])) << "\" cy=\"" << fmt(py(m[1]))
        << "\" r=\"4\" fill=\"#000000\"/>\n";
  }
  double legend_y = kMargin + 10.0;
  for (const auto& s : plot.series) {
    svg << "<rect x=\"" << plot.width - kMargin - 110 << "\" y=\""
        << legend_y - 8 << "\" width=\"12\" height=\"4\" fill=\"" << s.color
        << "\"/>\n";
    svg << "<text x=\"" << plot.width - kMargin - 92 << "\" y=\"" << legend_y
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
        << "</text>\n";
    legend_y += 16.0;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_svg(const SvgPlot& plot, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_svg: cannot open " + path);
  out << render_svg(plot);
}

}  // namespace ubf
