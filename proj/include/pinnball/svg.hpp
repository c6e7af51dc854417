#pragma once

// Minimal self-contained SVG line plots (log-scale y), enough for loss
// curves; no external assets, no fonts beyond the generic family.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace pinnball {

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> xy;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline const char* series_color(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};
  return palette[i % 6];
}

}  // namespace detail

// Polyline plot; y is drawn on a log10 scale over the data range, and
// non-positive y values are clamped to the smallest positive value.
inline std::string svg_line_plot(const std::string& title,
                                 const std::string& x_label,
                                 const std::string& y_label,
                                 const std::vector<PlotSeries>& series) {
  const double width = 720, height = 480;
  const double ml = 84, mr = 24, mt = 48, mb = 60;  // margins
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = std::numeric_limits<double>::infinity(), ymax = 0.0;
  for (const auto& s : series)
    for (const auto& [x, y] : s.xy) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      if (y > 0.0) {
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymin < std::numeric_limits<double>::infinity())) {
    ymin = 1e-6;
    ymax = 1.0;
  }
  if (!(ymax > ymin)) ymax = ymin * 10.0;
  const double ly_min = std::log10(ymin), ly_max = std::log10(ymax);

  const auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * pw;
  };
  const auto py = [&](double y) {
    const double ly = std::log10(std::max(y, ymin));
    return mt + ph - (ly - ly_min) / (ly_max - ly_min) * ph;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"16\" text-anchor=\"middle\">"
      << title << "</text>\n";

  // frame
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

  // y ticks at powers of ten
  for (int e = int(std::ceil(ly_min)); e <= int(std::floor(ly_max)); ++e) {
    const double y = py(std::pow(10.0, e));
    out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << (ml + pw)
        << "\" y2=\"" << y
        << "\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"end\">1e"
        << e << "</text>\n";
  }
  // x ticks: 5 evenly spaced
  for (int k = 0; k <= 4; ++k) {
    const double x = xmin + (xmax - xmin) * k / 4.0;
    out << "<line x1=\"" << px(x) << "\" y1=\"" << mt + ph << "\" x2=\""
        << px(x) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(x) << "\" y=\"" << mt + ph + 20
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">"
        << detail::svg_num(x) << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 16
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">"
      << x_label << "</text>\n";
  out << "<text x=\"20\" y=\"" << mt + ph / 2
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << mt + ph / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    out << "<polyline fill=\"none\" stroke=\"" << detail::series_color(si)
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.xy)
      out << detail::svg_num(px(x)) << "," << detail::svg_num(py(y)) << " ";
    out << "\"/>\n";
    // legend
    const double lx = ml + 12, ly = mt + 16 + 18.0 * double(si);
    out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 22
        << "\" y2=\"" << ly << "\" stroke=\"" << detail::series_color(si)
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << lx + 28 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.name
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace pinnball
