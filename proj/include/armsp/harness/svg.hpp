#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "armsp/core/stats.hpp"
#include "armsp/core/vec3.hpp"
#include "armsp/env/grid_map.hpp"

namespace armsp {

inline const std::vector<std::string>& svg_palette() {
  static const std::vector<std::string> colors{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                               "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  return colors;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

/// Minimal SVG 1.1 writer with a data-to-pixel mapping for one plot area.
class SvgCanvas {
 public:
  SvgCanvas(double width, double height) : width_(width), height_(height) {}

  void set_area(double left, double top, double right, double bottom) {
    left_ = left;
    top_ = top;
    right_ = right;
    bottom_ = bottom;
  }

  void set_range(double x0, double x1, double y0, double y1) {
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) y1 = y0 + 1.0;
    x0_ = x0;
    x1_ = x1;
    y0_ = y0;
    y1_ = y1;
  }

  double px(double x) const { return left_ + (x - x0_) / (x1_ - x0_) * (right_ - left_); }
  double py(double y) const { return bottom_ - (y - y0_) / (y1_ - y0_) * (bottom_ - top_); }

  void line(double x0, double y0, double x1, double y1, const std::string& color, double width = 1.0,
            const std::string& dash = "") {
    body_ << "<line x1=\"" << num(px(x0)) << "\" y1=\"" << num(py(y0)) << "\" x2=\"" << num(px(x1)) << "\" y2=\""
          << num(py(y1)) << "\" stroke=\"" << color << "\" stroke-width=\"" << num(width) << "\"";
    if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
    body_ << "/>\n";
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& color,
                double width = 1.5) {
    if (xs.empty()) return;
    body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(width) << "\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
      body_ << num(px(xs[i])) << ',' << num(py(ys[i])) << ' ';
    }
    body_ << "\"/>\n";
  }

  void rect(double x0, double y0, double x1, double y1, const std::string& fill, const std::string& stroke = "none") {
    const double a = px(std::min(x0, x1)), b = py(std::max(y0, y1));
    body_ << "<rect x=\"" << num(a) << "\" y=\"" << num(b) << "\" width=\"" << num(std::abs(px(x1) - px(x0)))
          << "\" height=\"" << num(std::abs(py(y1) - py(y0))) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
          << "\"/>\n";
  }

  void circle(double x, double y, double r_px, const std::string& fill, const std::string& stroke = "none") {
    body_ << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"" << num(r_px) << "\" fill=\""
          << fill << "\" stroke=\"" << stroke << "\"/>\n";
  }

  /// Text at pixel coordinates.
  void text(double x_px, double y_px, const std::string& s, double size = 12, const std::string& anchor = "start") {
    body_ << "<text x=\"" << num(x_px) << "\" y=\"" << num(y_px) << "\" font-family=\"sans-serif\" font-size=\""
          << num(size) << "\" text-anchor=\"" << anchor << "\">" << xml_escape(s) << "</text>\n";
  }

  void raw(const std::string& s) { body_ << s; }

  /// Frame plus min/max tick labels on both axes.
  void axes(const std::string& xlabel, const std::string& ylabel) {
    body_ << "<rect x=\"" << num(left_) << "\" y=\"" << num(top_) << "\" width=\"" << num(right_ - left_)
          << "\" height=\"" << num(bottom_ - top_) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    text(left_, bottom_ + 16, short_num(x0_), 10, "middle");
    text(right_, bottom_ + 16, short_num(x1_), 10, "middle");
    text(left_ - 4, bottom_, short_num(y0_), 10, "end");
    text(left_ - 4, top_ + 8, short_num(y1_), 10, "end");
    text((left_ + right_) / 2, bottom_ + 32, xlabel, 12, "middle");
    body_ << "<text x=\"" << num(left_ - 46) << "\" y=\"" << num((top_ + bottom_) / 2)
          << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
          << num(left_ - 46) << ' ' << num((top_ + bottom_) / 2) << ")\">" << xml_escape(ylabel) << "</text>\n";
  }

  std::string str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width_) << "\" height=\""
        << num(height_) << "\" viewBox=\"0 0 " << num(width_) << ' ' << num(height_) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << body_.str() << "</svg>\n";
    return out.str();
  }

  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }

  static std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
  }

 private:
  double width_, height_;
  double left_ = 60, top_ = 30, right_ = 0, bottom_ = 0;
  double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;
  std::ostringstream body_;
};

struct Series {
  std::string label;
  std::vector<double> y;  // plotted against 1..n
};

/// Best cost against iteration, one curve per series.
inline std::string convergence_svg(const std::vector<Series>& series, const std::string& title,
                                   const std::string& ylabel = "best cost") {
  SvgCanvas c(720, 440);
  c.set_area(80, 40, 560, 380);
  double n = 1, lo = INFINITY, hi = -INFINITY;
  for (const auto& s : series) {
    n = std::max(n, static_cast<double>(s.y.size()));
    for (double v : s.y)
      if (std::isfinite(v)) { lo = std::min(lo, v); hi = std::max(hi, v); }
  }
  if (!std::isfinite(lo)) { lo = 0; hi = 1; }
  c.set_range(1, n, lo, hi);
  c.axes("iteration", ylabel);
  c.text(320, 24, title, 14, "middle");
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& col = svg_palette()[k % svg_palette().size()];
    std::vector<double> xs(series[k].y.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i + 1);
    c.polyline(xs, series[k].y, col);
    c.text(575, 60 + 18.0 * static_cast<double>(k), series[k].label, 12);
    c.raw("<rect x=\"565\" y=\"" + SvgCanvas::num(51 + 18.0 * static_cast<double>(k)) +
          "\" width=\"8\" height=\"8\" fill=\"" + col + "\"/>\n");
  }
  return c.str();
}

struct BoxGroup {
  std::string label;
  std::vector<double> values;
  std::string color = "#1f77b4";
};

/// Tukey boxplots (whiskers at 1.5 IQR, outliers as crosses), one per group,
/// with an optional horizontal reference line.
inline std::string boxplot_svg(const std::vector<BoxGroup>& groups, const std::string& title, const std::string& ylabel,
                               double reference = NAN) {
  const double slot = 70;
  const double width = std::max(420.0, 140 + slot * static_cast<double>(groups.size()));
  SvgCanvas c(width, 460);
  c.set_area(90, 40, width - 30, 360);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& g : groups)
    for (double v : g.values)
      if (std::isfinite(v)) { lo = std::min(lo, v); hi = std::max(hi, v); }
  if (std::isfinite(reference)) { lo = std::min(lo, reference); hi = std::max(hi, reference); }
  if (!std::isfinite(lo)) { lo = 0; hi = 1; }
  const double pad = 0.05 * (hi - lo + 1e-12);
  c.set_range(0, static_cast<double>(std::max<std::size_t>(1, groups.size())), lo - pad, hi + pad);
  c.axes("", ylabel);
  c.text(width / 2, 24, title, 14, "middle");
  for (std::size_t k = 0; k < groups.size(); ++k) {
    std::vector<double> v;
    for (double x : groups[k].values)
      if (std::isfinite(x)) v.push_back(x);
    const double mid = static_cast<double>(k) + 0.5;
    c.text(c.px(mid), 378, groups[k].label, 10, "middle");
    if (v.empty()) continue;
    const double q1 = quantile(v, 0.25), q2 = quantile(v, 0.5), q3 = quantile(v, 0.75);
    const double fence_lo = q1 - 1.5 * (q3 - q1), fence_hi = q3 + 1.5 * (q3 - q1);
    double wlo = q1, whi = q3;
    for (double x : v) {
      if (x >= fence_lo) wlo = std::min(wlo, x);
      if (x <= fence_hi) whi = std::max(whi, x);
    }
    const auto& col = groups[k].color;
    c.line(mid, wlo, mid, q1, "#333");
    c.line(mid, q3, mid, whi, "#333");
    c.line(mid - 0.12, wlo, mid + 0.12, wlo, "#333");
    c.line(mid - 0.12, whi, mid + 0.12, whi, "#333");
    c.rect(mid - 0.3, q1, mid + 0.3, q3, col, "#333");
    c.line(mid - 0.3, q2, mid + 0.3, q2, "#000", 2.0);
    for (double x : v)
      if (x < fence_lo || x > fence_hi) {
        c.line(mid - 0.05, x, mid + 0.05, x, "#d62728");
        c.circle(mid, x, 2.0, "none", "#d62728");
      }
  }
  if (std::isfinite(reference))
    c.line(0, reference, static_cast<double>(groups.size()), reference, "#d62728", 1.5, "6,4");
  return c.str();
}

/// Map background drawn as coarse grey/black blocks for coast and uncertain cells.
inline void draw_map(SvgCanvas& c, const GridMap& map, std::size_t max_blocks = 200) {
  const std::size_t step = std::max<std::size_t>(1, std::max(map.width_cells, map.height_cells) / max_blocks);
  for (std::size_t y = 0; y < map.height_cells; y += step)
    for (std::size_t x = 0; x < map.width_cells; x += step) {
      const double v = map.at(x, y);
      if (v == 1.0) continue;
      const std::string fill = v == 0.0 ? "#222" : "#aaa";
      const double s = map.cell_size;
      c.rect(static_cast<double>(x) * s, static_cast<double>(y) * s, static_cast<double>(x + step) * s,
             static_cast<double>(y + step) * s, fill);
    }
}

}  // namespace armsp
