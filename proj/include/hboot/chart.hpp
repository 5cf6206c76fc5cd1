#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hboot/dataset.hpp"
#include "hboot/format.hpp"

namespace hboot {

struct ChartEntry {
  std::string label;
  double lower = 0.0;
  double upper = 0.0;
  double center = 0.0;  // original estimate, drawn as the midpoint marker
};

namespace detail {

[[nodiscard]] inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// Tick step rounded to a 1/2/5 decade value.
[[nodiscard]] inline double nice_step(double raw) {
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double nice = 10.0;
  if (frac <= 1.0) nice = 1.0;
  else if (frac <= 2.0) nice = 2.0;
  else if (frac <= 5.0) nice = 5.0;
  return nice * mag;
}

[[nodiscard]] inline int tick_decimals(double step) {
  if (step >= 1.0) return 0;
  return static_cast<int>(std::ceil(-std::log10(step) - 1e-9));
}

}  // namespace detail

// One horizontal confidence-interval segment per entry with end caps and a
// center marker, labeled x axis. Output bytes are a pure function of the
// input (all coordinates go through fixed-point formatting).
[[nodiscard]] inline std::string render_interval_chart(const std::vector<ChartEntry>& entries,
                                                       const std::string& title,
                                                       const std::string& x_label) {
  if (entries.empty()) throw std::invalid_argument("render_interval_chart: no entries");

  double lo = entries.front().lower;
  double hi = entries.front().upper;
  for (const ChartEntry& e : entries) {
    lo = std::min(lo, e.lower);
    hi = std::max(hi, e.upper);
  }
  double pad = 0.05 * (hi - lo);
  if (pad <= 0.0) pad = std::max(1.0, 0.1 * std::fabs(hi));
  lo -= pad;
  hi += pad;

  const double left = 170.0, right = 40.0, top = 48.0, bottom = 58.0;
  const double row_height = 34.0;
  const double plot_width = 560.0;
  const double width = left + plot_width + right;
  const double height = top + row_height * static_cast<double>(entries.size()) + bottom;
  const double plot_bottom = height - bottom;

  const auto x_of = [&](double v) { return left + (v - lo) / (hi - lo) * plot_width; };
  const auto fx = [](double v) { return format_fixed(v, 2); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fx(width) + "\" height=\"" +
         fx(height) + "\" viewBox=\"0 0 " + fx(width) + " " + fx(height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fx(width) + "\" height=\"" + fx(height) +
         "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fx(width / 2.0) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         detail::xml_escape(title) + "</text>\n";

  // x axis with 1/2/5 ticks
  svg += "<line x1=\"" + fx(left) + "\" y1=\"" + fx(plot_bottom) + "\" x2=\"" +
         fx(left + plot_width) + "\" y2=\"" + fx(plot_bottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  const double step = detail::nice_step((hi - lo) / 6.0);
  const int decimals = detail::tick_decimals(step);
  double tick = std::ceil(lo / step) * step;
  for (; tick <= hi + 1e-12 * std::fabs(step); tick += step) {
    const double x = x_of(tick);
    svg += "<line x1=\"" + fx(x) + "\" y1=\"" + fx(plot_bottom) + "\" x2=\"" + fx(x) +
           "\" y2=\"" + fx(plot_bottom + 6.0) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fx(x) + "\" y=\"" + fx(plot_bottom + 20.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_fixed(tick, decimals) + "</text>\n";
  }
  svg += "<text x=\"" + fx(left + plot_width / 2.0) + "\" y=\"" + fx(height - 14.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         detail::xml_escape(x_label) + "</text>\n";

  for (std::size_t i = 0; i < entries.size(); ++i) {
    const ChartEntry& e = entries[i];
    const double y = top + row_height * (static_cast<double>(i) + 0.5);
    const double x1 = x_of(e.lower);
    const double x2 = x_of(e.upper);
    svg += "<text x=\"" + fx(left - 12.0) + "\" y=\"" + fx(y + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
           detail::xml_escape(e.label) + "</text>\n";
    svg += "<line x1=\"" + fx(x1) + "\" y1=\"" + fx(y) + "\" x2=\"" + fx(x2) + "\" y2=\"" +
           fx(y) + "\" stroke=\"#1f4e8c\" stroke-width=\"2\"/>\n";
    for (double xe : {x1, x2}) {
      svg += "<line x1=\"" + fx(xe) + "\" y1=\"" + fx(y - 5.0) + "\" x2=\"" + fx(xe) +
             "\" y2=\"" + fx(y + 5.0) + "\" stroke=\"#1f4e8c\" stroke-width=\"2\"/>\n";
    }
    svg += "<circle cx=\"" + fx(x_of(e.center)) + "\" cy=\"" + fx(y) +
           "\" r=\"3.5\" fill=\"#c23b22\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

inline void emit_interval_chart(const std::vector<ChartEntry>& entries, const std::string& title,
                                const std::string& x_label, const std::string& path) {
  write_file_atomic(path, render_interval_chart(entries, title, x_label));
}

}  // namespace hboot
