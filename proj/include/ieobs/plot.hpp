// Copyright 2026 The ieobs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IEOBS_PLOT_HPP_
#define IEOBS_PLOT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ieobs/trace.hpp"

namespace ieobs
{

struct PlotSeries
{
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions
{
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  bool log_y = false;
  std::optional<double> marker_x;     ///< vertical reference line (e.g. the switch step)
  std::string marker_label = "switch";
};

namespace detail
{

inline std::string svg_num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string svg_escape(const std::string & s)
{
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

inline std::string tick_label(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

/// Largest {1,2,5}*10^k step not exceeding the raw spacing.
inline double nice_step(double range, int target_ticks)
{
  const double raw = range / std::max(target_ticks, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double mantissa = raw / mag;
  double snapped = 1.0;
  if (mantissa >= 5.0) {
    snapped = 5.0;
  } else if (mantissa >= 2.0) {
    snapped = 2.0;
  }
  return snapped * mag;
}

}  // namespace detail

/// Renders a self-contained SVG line plot. Non-finite points are dropped;
/// on a log axis non-positive points are dropped as well. A series reduced
/// to a single point is drawn as a dot so degenerate traces stay visible.
/// The output depends only on the arguments, byte for byte.
inline std::string render_line_plot_svg(
  const std::vector<PlotSeries> & series, const PlotOptions & options)
{
  static const char * kPalette[] = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  constexpr int kPaletteSize = 6;
  constexpr double kWidth = 860.0;
  constexpr double kHeight = 520.0;
  constexpr double kLeft = 78.0;
  constexpr double kRight = 24.0;
  constexpr double kTop = 46.0;
  constexpr double kBottom = 58.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  // Visible points per series, with the y transform applied up front.
  std::vector<std::vector<std::pair<double, double>>> visible(series.size());
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;
  bool any = false;
  for (size_t s = 0; s < series.size(); ++s) {
    if (series[s].x.size() != series[s].y.size()) {
      throw std::invalid_argument("render_line_plot_svg: series x/y length mismatch");
    }
    for (size_t i = 0; i < series[s].x.size(); ++i) {
      const double px = series[s].x[i];
      double py = series[s].y[i];
      if (!std::isfinite(px) || !std::isfinite(py)) {continue;}
      if (options.log_y) {
        if (!(py > 0.0)) {continue;}
        py = std::log10(py);
      }
      visible[s].emplace_back(px, py);
      if (!any) {
        xmin = xmax = px;
        ymin = ymax = py;
        any = true;
      } else {
        xmin = std::min(xmin, px);
        xmax = std::max(xmax, px);
        ymin = std::min(ymin, py);
        ymax = std::max(ymax, py);
      }
    }
  }
  if (options.marker_x) {
    if (!any) {
      xmin = xmax = *options.marker_x;
      ymin = 0.0;
      ymax = 1.0;
      any = true;
    } else {
      xmin = std::min(xmin, *options.marker_x);
      xmax = std::max(xmax, *options.marker_x);
    }
  }
  if (!any) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const auto to_px = [&](double x) {return kLeft + (x - xmin) / (xmax - xmin) * plot_w;};
  const auto to_py = [&](double y) {return kTop + plot_h - (y - ymin) / (ymax - ymin) * plot_h;};

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"520\" "
    "viewBox=\"0 0 860 520\">\n";
  svg += "<rect width=\"860\" height=\"520\" fill=\"#ffffff\"/>\n";

  // Axis ticks and grid.
  std::string grid;
  std::string labels;
  const double x_step = detail::nice_step(xmax - xmin, 7);
  for (double tx = std::ceil(xmin / x_step) * x_step; tx <= xmax + 1e-9 * x_step; tx += x_step) {
    const double px = to_px(tx);
    grid += "<line x1=\"" + detail::svg_num(px) + "\" y1=\"" + detail::svg_num(kTop) +
      "\" x2=\"" + detail::svg_num(px) + "\" y2=\"" + detail::svg_num(kTop + plot_h) +
      "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    labels += "<text x=\"" + detail::svg_num(px) + "\" y=\"" + detail::svg_num(
      kTop + plot_h + 18.0) +
      "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333333\">" +
      detail::tick_label(tx) + "</text>\n";
  }
  if (options.log_y) {
    const long dec_lo = static_cast<long>(std::ceil(ymin - 1e-9));
    const long dec_hi = static_cast<long>(std::floor(ymax + 1e-9));
    const long span = std::max<long>(dec_hi - dec_lo, 1);
    const long stride = std::max<long>(1, (span + 7) / 8);
    for (long d = dec_lo; d <= dec_hi; d += stride) {
      const double py = to_py(static_cast<double>(d));
      grid += "<line x1=\"" + detail::svg_num(kLeft) + "\" y1=\"" + detail::svg_num(py) +
        "\" x2=\"" + detail::svg_num(kLeft + plot_w) + "\" y2=\"" + detail::svg_num(py) +
        "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
      labels += "<text x=\"" + detail::svg_num(kLeft - 8.0) + "\" y=\"" + detail::svg_num(
        py + 4.0) +
        "\" font-size=\"12\" text-anchor=\"end\" fill=\"#333333\">1e" + std::to_string(d) +
        "</text>\n";
    }
  } else {
    const double y_step = detail::nice_step(ymax - ymin, 6);
    for (double ty = std::ceil(ymin / y_step) * y_step; ty <= ymax + 1e-9 * y_step;
      ty += y_step)
    {
      const double py = to_py(ty);
      grid += "<line x1=\"" + detail::svg_num(kLeft) + "\" y1=\"" + detail::svg_num(py) +
        "\" x2=\"" + detail::svg_num(kLeft + plot_w) + "\" y2=\"" + detail::svg_num(py) +
        "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
      labels += "<text x=\"" + detail::svg_num(kLeft - 8.0) + "\" y=\"" + detail::svg_num(
        py + 4.0) +
        "\" font-size=\"12\" text-anchor=\"end\" fill=\"#333333\">" + detail::tick_label(ty) +
        "</text>\n";
    }
  }
  svg += grid;
  svg += labels;

  // Frame.
  svg += "<rect x=\"" + detail::svg_num(kLeft) + "\" y=\"" + detail::svg_num(kTop) +
    "\" width=\"" + detail::svg_num(plot_w) + "\" height=\"" + detail::svg_num(plot_h) +
    "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // Marker line.
  if (options.marker_x) {
    const double px = to_px(*options.marker_x);
    svg += "<line x1=\"" + detail::svg_num(px) + "\" y1=\"" + detail::svg_num(kTop) +
      "\" x2=\"" + detail::svg_num(px) + "\" y2=\"" + detail::svg_num(kTop + plot_h) +
      "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";
    svg += "<text x=\"" + detail::svg_num(px + 4.0) + "\" y=\"" + detail::svg_num(kTop + 14.0) +
      "\" font-size=\"12\" fill=\"#555555\">" + detail::svg_escape(options.marker_label) +
      "</text>\n";
  }

  // Data.
  for (size_t s = 0; s < series.size(); ++s) {
    const char * color = kPalette[s % kPaletteSize];
    const auto & pts = visible[s];
    if (pts.empty()) {continue;}
    if (pts.size() == 1) {
      svg += std::string("<circle cx=\"") + detail::svg_num(to_px(pts[0].first)) + "\" cy=\"" +
        detail::svg_num(to_py(pts[0].second)) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
      continue;
    }
    svg += std::string("<polyline fill=\"none\" stroke=\"") + color +
      "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i > 0) {svg += " ";}
      svg += detail::svg_num(to_px(pts[i].first)) + "," + detail::svg_num(to_py(pts[i].second));
    }
    svg += "\"/>\n";
  }

  // Legend for multi-series plots.
  if (series.size() > 1) {
    const double lx = kLeft + plot_w - 210.0;
    double ly = kTop + 12.0;
    for (size_t s = 0; s < series.size(); ++s) {
      const char * color = kPalette[s % kPaletteSize];
      svg += std::string("<line x1=\"") + detail::svg_num(lx) + "\" y1=\"" +
        detail::svg_num(ly) + "\" x2=\"" + detail::svg_num(lx + 26.0) + "\" y2=\"" +
        detail::svg_num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
      svg += "<text x=\"" + detail::svg_num(lx + 32.0) + "\" y=\"" + detail::svg_num(ly + 4.0) +
        "\" font-size=\"12\" fill=\"#333333\">" + detail::svg_escape(series[s].label) +
        "</text>\n";
      ly += 18.0;
    }
  }

  // Titles.
  svg += "<text x=\"" + detail::svg_num(kWidth / 2.0) + "\" y=\"24\" font-size=\"16\" "
    "text-anchor=\"middle\" fill=\"#111111\">" + detail::svg_escape(options.title) + "</text>\n";
  svg += "<text x=\"" + detail::svg_num(kLeft + plot_w / 2.0) + "\" y=\"" + detail::svg_num(
    kHeight - 14.0) +
    "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#333333\">" +
    detail::svg_escape(options.x_label) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + detail::svg_num(kTop + plot_h / 2.0) +
    "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#333333\" transform=\"rotate(-90 20 " +
    detail::svg_num(kTop + plot_h / 2.0) + ")\">" + detail::svg_escape(options.y_label) +
    "</text>\n";
  svg += "</svg>\n";
  return svg;
}

enum class TraceQuantity { kPsiErr, kXErr, kGammaSq, kGramMinEig };

inline const char * quantity_name(TraceQuantity q)
{
  switch (q) {
    case TraceQuantity::kPsiErr: return "psi_err";
    case TraceQuantity::kXErr: return "x_err";
    case TraceQuantity::kGammaSq: return "gamma_sq";
    case TraceQuantity::kGramMinEig: return "gram_min_eig";
  }
  return "";
}

inline double quantity_value(const TraceRecord & rec, TraceQuantity q)
{
  switch (q) {
    case TraceQuantity::kPsiErr: return rec.psi_err_norm;
    case TraceQuantity::kXErr: return rec.x_err_norm;
    case TraceQuantity::kGammaSq: return rec.gamma_sq;
    case TraceQuantity::kGramMinEig: return rec.gram_min_eig;
  }
  return 0.0;
}

inline PlotSeries make_series(
  const std::vector<TraceRecord> & trace, TraceQuantity quantity, const std::string & label)
{
  PlotSeries s;
  s.label = label;
  s.x.reserve(trace.size());
  s.y.reserve(trace.size());
  for (const TraceRecord & rec : trace) {
    s.x.push_back(static_cast<double>(rec.t));
    s.y.push_back(quantity_value(rec, quantity));
  }
  return s;
}

/// Writes a one-quantity plot of a trace, with an optional switch marker.
inline void emit_plot(
  const std::vector<TraceRecord> & trace, TraceQuantity quantity, const std::string & path,
  bool log_scale = false, std::optional<long> marker_step = std::nullopt)
{
  if (trace.empty()) {
    throw std::invalid_argument("emit_plot: trace is empty");
  }
  PlotOptions options;
  options.title = quantity_name(quantity);
  options.y_label = quantity_name(quantity);
  options.log_y = log_scale;
  if (marker_step) {
    options.marker_x = static_cast<double>(*marker_step);
  }
  const std::string svg =
    render_line_plot_svg({make_series(trace, quantity, quantity_name(quantity))}, options);
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("emit_plot: cannot open '" + path + "' for writing");
  }
  file << svg;
  if (!file) {
    throw std::runtime_error("emit_plot: write to '" + path + "' failed");
  }
}

}  // namespace ieobs

#endif  // IEOBS_PLOT_HPP_
