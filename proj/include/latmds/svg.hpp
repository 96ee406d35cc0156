#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "latmds/error.hpp"
#include "latmds/geometry.hpp"

namespace latmds::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct Options {
  int width = 640;
  int height = 480;
  std::string title;
  std::string x_label;
  std::string y_label;
};

namespace detail {

inline const char* palette(std::size_t k) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                 "#9467bd", "#ff7f0e", "#8c564b"};
  return colors[k % 6];
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;       // data range (already in plot coordinates)
  int left, right, top, bottom;  // pixel margins
  int width, height;
  double px(double x) const {
    return left + (x - x0) / (x1 - x0) * (width - left - right);
  }
  double py(double y) const {
    return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom);
  }
};

inline Frame make_frame(double x0, double x1, double y0, double y1,
                        const Options& opts) {
  if (!(x1 > x0)) { x0 -= 1.0; x1 += 1.0; }
  if (!(y1 > y0)) { y0 -= 1.0; y1 += 1.0; }
  const double xpad = 0.05 * (x1 - x0), ypad = 0.05 * (y1 - y0);
  return Frame{x0 - xpad, x1 + xpad, y0 - ypad, y1 + ypad,
               60, 20, opts.title.empty() ? 20 : 40, 45,
               opts.width, opts.height};
}

inline void emit_axes(std::ostringstream& os, const Frame& f,
                      const Options& opts, bool log_ticks) {
  os << "<rect x=\"" << f.left << "\" y=\"" << f.top << "\" width=\""
     << f.width - f.left - f.right << "\" height=\""
     << f.height - f.top - f.bottom
     << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  if (!opts.title.empty())
    os << "<text x=\"" << f.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"15\">" << opts.title
       << "</text>\n";
  if (!opts.x_label.empty())
    os << "<text x=\"" << f.width / 2 << "\" y=\"" << f.height - 10
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"12\">" << opts.x_label << "</text>\n";
  if (!opts.y_label.empty())
    os << "<text x=\"14\" y=\"" << f.height / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"12\" transform=\"rotate(-90 14 " << f.height / 2
       << ")\">" << opts.y_label << "</text>\n";
  // Integer ticks: decades when the data are log10 transformed.
  for (int t = static_cast<int>(std::ceil(f.x0));
       t <= static_cast<int>(std::floor(f.x1)); ++t) {
    const double x = f.px(t);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << f.height - f.bottom
       << "\" x2=\"" << num(x) << "\" y2=\"" << f.height - f.bottom + 5
       << "\" stroke=\"#333333\"/>\n";
    os << "<text x=\"" << num(x) << "\" y=\"" << f.height - f.bottom + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"11\">" << (log_ticks ? "1e" : "")
       << t << "</text>\n";
  }
  for (int t = static_cast<int>(std::ceil(f.y0));
       t <= static_cast<int>(std::floor(f.y1)); ++t) {
    const double y = f.py(t);
    os << "<line x1=\"" << f.left - 5 << "\" y1=\"" << num(y) << "\" x2=\""
       << f.left << "\" y2=\"" << num(y) << "\" stroke=\"#333333\"/>\n";
    os << "<text x=\"" << f.left - 8 << "\" y=\"" << num(y + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"11\">" << (log_ticks ? "1e" : "") << t << "</text>\n";
  }
}

}  // namespace detail

/// Log-log scatter: series points are (x, y) with x, y > 0; each finite
/// positive point becomes one circle mark. A 45 degree reference line
/// (y = x in the original scale) spans the shared range.
inline std::string scatter_loglog(const std::vector<Series>& series,
                                  const Options& opts = {}) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
        continue;
      lo = std::min({lo, std::log10(x), std::log10(y)});
      hi = std::max({hi, std::log10(x), std::log10(y)});
    }
  if (!(lo <= hi)) { lo = -1.0; hi = 1.0; }  // no plottable point
  const auto f = detail::make_frame(lo, hi, lo, hi, opts);

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
     << f.width << "\" height=\"" << f.height << "\">\n";
  detail::emit_axes(os, f, opts, true);
  os << "<line x1=\"" << detail::num(f.px(lo)) << "\" y1=\""
     << detail::num(f.py(lo)) << "\" x2=\"" << detail::num(f.px(hi))
     << "\" y2=\"" << detail::num(f.py(hi))
     << "\" stroke=\"#999999\" stroke-dasharray=\"6 4\"/>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = detail::palette(si);
    for (const auto& [x, y] : series[si].points) {
      if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
        continue;
      os << "<circle cx=\"" << detail::num(f.px(std::log10(x))) << "\" cy=\""
         << detail::num(f.py(std::log10(y)))
         << "\" r=\"3\" fill=\"" << color << "\" fill-opacity=\"0.7\"/>\n";
    }
    os << "<text x=\"" << f.width - f.right - 6 << "\" y=\""
       << f.top + 16 + 16 * static_cast<int>(si)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
          "fill=\"" << color << "\">" << series[si].label << "</text>\n";
  }
  os << "</svg>\n";
  return std::move(os).str();
}

/// Planar scatter of one or two configurations (e.g. latent vs estimate).
inline std::string config_scatter(const std::vector<Series>& series,
                                  const Options& opts = {}) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x); x1 = std::max(x1, x);
      y0 = std::min(y0, y); y1 = std::max(y1, y);
    }
  if (!(x0 <= x1)) { x0 = -1.0; x1 = 1.0; y0 = -1.0; y1 = 1.0; }
  const auto f = detail::make_frame(x0, x1, y0, y1, opts);
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
     << f.width << "\" height=\"" << f.height << "\">\n";
  detail::emit_axes(os, f, opts, false);
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = detail::palette(si);
    for (const auto& [x, y] : series[si].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      os << "<circle cx=\"" << detail::num(f.px(x)) << "\" cy=\""
         << detail::num(f.py(y)) << "\" r=\"2.5\" fill=\"" << color
         << "\" fill-opacity=\"0.7\"/>\n";
    }
    os << "<text x=\"" << f.width - f.right - 6 << "\" y=\""
       << f.top + 16 + 16 * static_cast<int>(si)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
          "fill=\"" << color << "\">" << series[si].label << "</text>\n";
  }
  os << "</svg>\n";
  return std::move(os).str();
}

inline std::vector<std::pair<double, double>> points_of(
    const Configuration& config) {
  latmds::detail::require(config.dim() == 2, errc::invalid_input,
                          "config scatter needs a planar configuration");
  std::vector<std::pair<double, double>> pts(config.size());
  for (int i = 0; i < config.size(); ++i)
    pts[i] = {config.points()(i, 0), config.points()(i, 1)};
  return pts;
}

}  // namespace latmds::svg
