// include/cleancoder/report/svg.h

// Copyright 2026 The Cleancoder Authors

// See ../../../COPYING for clarification regarding multiple authors
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

#ifndef CLEANCODER_REPORT_SVG_H_
#define CLEANCODER_REPORT_SVG_H_

#include <filesystem>
#include <string>
#include <vector>

namespace cleancoder::report {

struct BarSeries {
  std::string label;
  std::vector<double> values;  // one per group
};

struct BarChart {
  std::string title;
  std::string y_label;
  std::vector<std::string> groups;
  std::vector<BarSeries> series;
};

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<LineSeries> series;
};

std::string xml_escape(const std::string& s);

// Grouped bars: one group per x label, one bar per series within a group.
// Each bar is a <rect class="bar"> carrying data-series, data-group and
// data-value attributes.
std::string render_bar_chart(const BarChart& chart);

// Panels stacked vertically; each series is one <polyline class="series">
// with a data-series attribute. Legend entries follow series order.
std::string render_line_chart(const std::vector<LinePanel>& panels);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cleancoder::report

#endif  // CLEANCODER_REPORT_SVG_H_
