// src/report/svg.cc

// Copyright 2026 The Cleancoder Authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "cleancoder/report/svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "cleancoder/error.h"
#include "cleancoder/report/csv.h"

namespace cleancoder::report {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string text(double x, double y, const std::string& s, const std::string& anchor = "middle",
                 int size = 12) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + std::to_string(size) +
         "\" text-anchor=\"" + anchor + "\">" + xml_escape(s) + "</text>\n";
}

std::string header(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         num(w) + "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) +
         "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

// Axis range that includes zero for bars and pads a flat range for lines.
std::pair<double, double> value_range(double lo, double hi, bool include_zero) {
  if (include_zero) {
    lo = std::min(lo, 0.0);
    hi = std::max(hi, 0.0);
  }
  if (!(hi > lo)) {
    const double pad = std::abs(hi) > 0 ? std::abs(hi) * 0.1 : 1.0;
    hi += pad;
    if (!include_zero) lo -= pad;
  }
  return {lo, hi};
}

std::string y_axis(double x0, double y0, double plot_h, double lo, double hi,
                   const std::string& label) {
  std::string s;
  s += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" +
       num(y0 + plot_h) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = lo + (hi - lo) * i / 4.0;
    const double y = y0 + plot_h - plot_h * i / 4.0;
    s += "<line x1=\"" + num(x0 - 4) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x0) + "\" y2=\"" +
         num(y) + "\" stroke=\"black\"/>\n";
    s += text(x0 - 6, y + 4, tick(v), "end", 10);
  }
  s += "<text x=\"" + num(x0 - 45) + "\" y=\"" + num(y0 + plot_h / 2) +
       "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 " + num(x0 - 45) + " " +
       num(y0 + plot_h / 2) + ")\">" + xml_escape(label) + "</text>\n";
  return s;
}

std::string legend(double x, double y, const std::vector<std::string>& labels) {
  std::string s = "<g class=\"legend\">\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double yy = y + 16.0 * static_cast<double>(i);
    s += "<rect x=\"" + num(x) + "\" y=\"" + num(yy - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
         kPalette[i % kPaletteSize] + "\"/>\n";
    s += "<text class=\"legend-entry\" x=\"" + num(x + 14) + "\" y=\"" + num(yy) +
         "\" font-size=\"11\">" + xml_escape(labels[i]) + "</text>\n";
  }
  return s + "</g>\n";
}

}  // namespace

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_bar_chart(const BarChart& chart) {
  for (const BarSeries& s : chart.series) {
    if (s.values.size() != chart.groups.size()) {
      fail("bar chart series '", s.label, "' has ", s.values.size(), " values for ",
           chart.groups.size(), " groups");
    }
  }
  const double left = 70, top = 40, plot_w = 520, plot_h = 300, legend_w = 170;
  const double width = left + plot_w + legend_w, height = top + plot_h + 60;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const BarSeries& s : chart.series) {
    for (double v : s.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (chart.series.empty() || chart.groups.empty()) lo = hi = 0.0;
  std::tie(lo, hi) = value_range(lo, hi, true);
  auto y_of = [&](double v) { return top + plot_h - plot_h * (v - lo) / (hi - lo); };

  std::string s = header(width, height);
  s += text(left + plot_w / 2, 22, chart.title, "middle", 14);
  s += y_axis(left, top, plot_h, lo, hi, chart.y_label);
  s += "<line x1=\"" + num(left) + "\" y1=\"" + num(y_of(0)) + "\" x2=\"" + num(left + plot_w) +
       "\" y2=\"" + num(y_of(0)) + "\" stroke=\"black\"/>\n";
  const double group_w = chart.groups.empty() ? plot_w : plot_w / chart.groups.size();
  const double bar_w =
      chart.series.empty() ? 0 : group_w * 0.8 / static_cast<double>(chart.series.size());
  for (std::size_t gi = 0; gi < chart.groups.size(); ++gi) {
    const double gx = left + group_w * gi + group_w * 0.1;
    for (std::size_t si = 0; si < chart.series.size(); ++si) {
      const double v = chart.series[si].values[gi];
      const double y1 = y_of(std::max(v, 0.0)), y2 = y_of(std::min(v, 0.0));
      s += "<rect class=\"bar\" data-series=\"" + xml_escape(chart.series[si].label) +
           "\" data-group=\"" + xml_escape(chart.groups[gi]) + "\" data-value=\"" +
           format_real(v) + "\" x=\"" + num(gx + bar_w * si) + "\" y=\"" + num(y1) +
           "\" width=\"" + num(bar_w) + "\" height=\"" + num(y2 - y1) + "\" fill=\"" +
           kPalette[si % kPaletteSize] + "\"/>\n";
    }
    s += text(left + group_w * (gi + 0.5), top + plot_h + 18, chart.groups[gi]);
  }
  std::vector<std::string> labels;
  for (const BarSeries& bs : chart.series) labels.push_back(bs.label);
  s += legend(left + plot_w + 20, top + 10, labels);
  return s + "</svg>\n";
}

std::string render_line_chart(const std::vector<LinePanel>& panels) {
  const double left = 70, top = 40, plot_w = 520, plot_h = 220, gap = 80, legend_w = 200;
  const double width = left + plot_w + legend_w;
  const double height = top + (plot_h + gap) * static_cast<double>(panels.size());
  std::string s = header(width, height);
  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const LinePanel& p = panels[pi];
    const double y0 = top + (plot_h + gap) * pi;
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    for (const LineSeries& ls : p.series) {
      if (ls.x.size() != ls.y.size()) fail("line series '", ls.label, "' has mismatched x/y");
      for (std::size_t i = 0; i < ls.x.size(); ++i) {
        if (!std::isfinite(ls.y[i])) continue;
        xlo = std::min(xlo, ls.x[i]);
        xhi = std::max(xhi, ls.x[i]);
        ylo = std::min(ylo, ls.y[i]);
        yhi = std::max(yhi, ls.y[i]);
      }
    }
    if (!std::isfinite(xlo)) xlo = xhi = ylo = yhi = 0.0;
    std::tie(xlo, xhi) = value_range(xlo, xhi, false);
    std::tie(ylo, yhi) = value_range(ylo, yhi, false);
    s += "<g class=\"panel\" data-title=\"" + xml_escape(p.title) + "\">\n";
    s += text(left + plot_w / 2, y0 - 12, p.title, "middle", 14);
    s += y_axis(left, y0, plot_h, ylo, yhi, p.y_label);
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(y0 + plot_h) + "\" x2=\"" +
         num(left + plot_w) + "\" y2=\"" + num(y0 + plot_h) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double x = left + plot_w * i / 4.0;
      s += text(x, y0 + plot_h + 16, tick(xlo + (xhi - xlo) * i / 4.0), "middle", 10);
    }
    s += text(left + plot_w / 2, y0 + plot_h + 34, p.x_label);
    std::vector<std::string> labels;
    for (std::size_t si = 0; si < p.series.size(); ++si) {
      const LineSeries& ls = p.series[si];
      labels.push_back(ls.label);
      std::string pts;
      for (std::size_t i = 0; i < ls.x.size(); ++i) {
        if (!std::isfinite(ls.y[i])) continue;
        const double x = left + plot_w * (ls.x[i] - xlo) / (xhi - xlo);
        const double y = y0 + plot_h - plot_h * (ls.y[i] - ylo) / (yhi - ylo);
        if (!pts.empty()) pts += ' ';
        pts += num(x) + "," + num(y);
      }
      s += "<polyline class=\"series\" data-series=\"" + xml_escape(ls.label) + "\" points=\"" +
           pts + "\" fill=\"none\" stroke=\"" + kPalette[si % kPaletteSize] +
           "\" stroke-width=\"1.5\"/>\n";
    }
    s += legend(left + plot_w + 20, y0 + 10, labels);
    s += "</g>\n";
  }
  return s + "</svg>\n";
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write ", path.string());
  out << contents;
  if (!out) fail("error writing ", path.string());
}

}  // namespace cleancoder::report
