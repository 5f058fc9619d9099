// Minimal SVG scatter plots (points + optional fitted line) for the
// experiment reports.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace specgeo {

struct PlotRequest {
  std::string title;
  std::string x_label, y_label;
  std::vector<std::pair<double, double>> points;
  bool log_log = false;
  // Fitted line y = slope*x + intercept in plot coordinates (after any log
  // transform); drawn when has_fit.
  bool has_fit = false;
  double fit_slope = 0.0, fit_intercept = 0.0;
};

inline void write_svg_plot(const PlotRequest& req, std::ostream& os) {
  if (req.points.empty())
    throw std::invalid_argument("write_svg_plot: no points for " + req.title);
  const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
  auto tx = [&](double v) { return req.log_log ? std::log10(v) : v; };
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (auto [x, y] : req.points) {
    if (req.log_log && (x <= 0.0 || y <= 0.0))
      throw std::invalid_argument("write_svg_plot: nonpositive value on log axis");
    xmin = std::min(xmin, tx(x));
    xmax = std::max(xmax, tx(x));
    ymin = std::min(ymin, tx(y));
    ymax = std::max(ymax, tx(y));
  }
  double padx = std::max(1e-9, 0.08 * (xmax - xmin));
  double pady = std::max(1e-9, 0.08 * (ymax - ymin));
  xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;
  auto px = [&](double v) { return ml + (tx(v) - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (tx(v) - ymin) / (ymax - ymin) * (H - mt - mb); };
  char buf[256];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
     << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.0f\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">%s</text>\n",
                W / 2, req.title.c_str());
  os << buf;
  // axes
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                ml, H - mb, W - mr, H - mb);
  os << buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                ml, mt, ml, H - mb);
  os << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.0f\" y=\"%.0f\" text-anchor=\"middle\" font-size=\"13\">%s</text>\n",
                W / 2, H - 12.0, req.x_label.c_str());
  os << buf;
  std::snprintf(
      buf, sizeof(buf),
      "<text x=\"18\" y=\"%.0f\" text-anchor=\"middle\" font-size=\"13\" "
      "transform=\"rotate(-90 18 %.0f)\">%s</text>\n",
      H / 2, H / 2, req.y_label.c_str());
  os << buf;
  // fitted line across the x range, in transformed coordinates
  if (req.has_fit) {
    double y1 = req.fit_slope * xmin + req.fit_intercept;
    double y2 = req.fit_slope * xmax + req.fit_intercept;
    auto pyl = [&](double ty) {
      return H - mb - (ty - ymin) / (ymax - ymin) * (H - mt - mb);
    };
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"#c0392b\" stroke-width=\"1.5\" class=\"fit\"/>\n",
                  ml, pyl(y1), W - mr, pyl(y2));
    os << buf;
  }
  for (auto [x, y] : req.points) {
    std::snprintf(buf, sizeof(buf),
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"#2c6fad\" "
                  "class=\"pt\"/>\n",
                  px(x), py(y));
    os << buf;
  }
  os << "</svg>\n";
}

}  // namespace specgeo
