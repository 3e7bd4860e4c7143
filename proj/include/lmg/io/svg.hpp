#pragma once

// Minimal self-contained SVG line plots: rectangular panels with linear axes,
// ticks, labels, legends, and polylines.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace lmg::io {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
};

struct Rect {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;
};

struct Panel {
  Rect frame;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  bool legend = true;
  double font_size = 13.0;
};

namespace svg_detail {

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v, double step) {
  char buf[32];
  if (std::abs(v) < step * 1e-9) v = 0.0;
  const double mag = std::max(std::abs(v), step);
  if (mag >= 1e5 || mag < 1e-3) {
    std::snprintf(buf, sizeof buf, "%.2g", v);
  } else {
    const int decimals = std::max(0, static_cast<int>(std::ceil(-std::log10(step) - 1e-9)));
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  }
  return buf;
}

inline double nice_step(double range, int target) {
  const double raw = range / std::max(target, 1);
  const double p = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * p >= raw) return m * p;
  }
  return 10.0 * p;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finalize(double pad) {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo <= 0.0) {
      const double w = std::max(std::abs(lo), 1.0) * 0.05;
      lo -= w;
      hi += w;
    }
    const double w = hi - lo;
    lo -= pad * w;
    hi += pad * w;
  }
};

constexpr std::array<const char*, 8> kColors{"#1f3fbf", "#8e44ad", "#000000", "#d62728",
                                             "#ff7f0e", "#2ca02c", "#17becf", "#e377c2"};
constexpr std::array<const char*, 4> kDashes{"", "6,3", "2,3", "8,3,2,3"};

}  // namespace svg_detail

inline void render_panel(std::ostringstream& os, const Panel& p) {
  using namespace svg_detail;
  Range xr, yr;
  for (const auto& s : p.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
        xr.include(s.x[i]);
        yr.include(s.y[i]);
      }
    }
  }
  xr.finalize(0.0);
  yr.finalize(0.05);

  const double left = p.frame.x + 4.6 * p.font_size;
  const double right = p.frame.x + p.frame.width - 0.8 * p.font_size;
  const double top = p.frame.y + (p.title.empty() ? 0.8 : 1.8) * p.font_size;
  const double bottom = p.frame.y + p.frame.height - 3.0 * p.font_size;
  const auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * (right - left); };
  const auto py = [&](double y) { return bottom - (y - yr.lo) / (yr.hi - yr.lo) * (bottom - top); };

  os << "<g font-family=\"Helvetica,Arial,sans-serif\" font-size=\"" << num(p.font_size) << "\">\n";
  os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(right - left) << "\" height=\""
     << num(bottom - top) << "\" fill=\"white\" stroke=\"black\"/>\n";
  if (!p.title.empty()) {
    os << "<text x=\"" << num(left) << "\" y=\"" << num(top - 0.5 * p.font_size) << "\" font-weight=\"bold\">"
       << escape(p.title) << "</text>\n";
  }

  const double xs = nice_step(xr.hi - xr.lo, 6);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi + 1e-9 * xs; t += xs) {
    os << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(px(t)) << "\" y2=\""
       << num(bottom - 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(px(t)) << "\" y=\"" << num(bottom + 1.2 * p.font_size)
       << "\" text-anchor=\"middle\">" << tick_label(t, xs) << "</text>\n";
  }
  const double ys = nice_step(yr.hi - yr.lo, 5);
  for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi + 1e-9 * ys; t += ys) {
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left + 5) << "\" y2=\""
       << num(py(t)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(left - 4) << "\" y=\"" << num(py(t) + 0.35 * p.font_size)
       << "\" text-anchor=\"end\">" << tick_label(t, ys) << "</text>\n";
  }
  os << "<text x=\"" << num(0.5 * (left + right)) << "\" y=\"" << num(bottom + 2.5 * p.font_size)
     << "\" text-anchor=\"middle\">" << escape(p.x_label) << "</text>\n";
  os << "<text transform=\"translate(" << num(p.frame.x + 1.1 * p.font_size) << "," << num(0.5 * (top + bottom))
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(p.y_label) << "</text>\n";

  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& s = p.series[k];
    const char* color = kColors[k % kColors.size()];
    const char* dash = kDashes[(k / kColors.size() + k) % kDashes.size()];
    std::ostringstream pts;
    std::size_t drawn = 0;
    auto flush = [&] {
      if (drawn > 1) {
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.4\"";
        if (*dash) os << " stroke-dasharray=\"" << dash << "\"";
        os << " points=\"" << pts.str() << "\"/>\n";
      }
      pts.str("");
      drawn = 0;
    };
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      pts << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
      ++drawn;
      if (s.markers) {
        os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"3\" fill=\"" << color
           << "\"/>\n";
      }
    }
    if (!s.markers) flush();
  }

  if (p.legend && p.series.size() > 1) {
    double ly = top + 1.2 * p.font_size;
    for (std::size_t k = 0; k < p.series.size(); ++k) {
      const char* color = kColors[k % kColors.size()];
      const char* dash = kDashes[(k / kColors.size() + k) % kDashes.size()];
      const double lx = right - 11.0 * p.font_size;
      os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 0.3 * p.font_size) << "\" x2=\""
         << num(lx + 2.0 * p.font_size) << "\" y2=\"" << num(ly - 0.3 * p.font_size) << "\" stroke=\"" << color
         << "\" stroke-width=\"1.4\"";
      if (*dash) os << " stroke-dasharray=\"" << dash << "\"";
      os << "/>\n<text x=\"" << num(lx + 2.4 * p.font_size) << "\" y=\"" << num(ly) << "\">"
         << escape(p.series[k].label) << "</text>\n";
      ly += 1.2 * p.font_size;
    }
  }
  os << "</g>\n";
}

inline std::string render_svg(double width, double height, const std::vector<Panel>& panels) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_detail::num(width) << "\" height=\""
     << svg_detail::num(height) << "\" viewBox=\"0 0 " << svg_detail::num(width) << ' ' << svg_detail::num(height)
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& p : panels) render_panel(os, p);
  os << "</svg>\n";
  return os.str();
}

}  // namespace lmg::io
