// src/report/snr_report.cc

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

#include "cleancoder/report/snr_report.h"

#include <algorithm>
#include <map>

#include "cleancoder/error.h"
#include "cleancoder/report/csv.h"

namespace cleancoder::report {

std::vector<SnrReportRow> snr_report(const std::vector<RowValue>& rows, const std::string& metric,
                                     std::uint64_t seed) {
  std::vector<std::string> conditions;
  std::vector<double> snrs;
  for (const RowValue& r : rows) {
    if (std::find(conditions.begin(), conditions.end(), r.condition) == conditions.end()) {
      conditions.push_back(r.condition);
    }
    if (std::find(snrs.begin(), snrs.end(), r.snr_db) == snrs.end()) snrs.push_back(r.snr_db);
  }
  std::sort(snrs.begin(), snrs.end());
  std::vector<SnrReportRow> out;
  for (double snr : snrs) {
    for (const std::string& cond : conditions) {
      double sum = 0.0;
      std::size_t n = 0;
      for (const RowValue& r : rows) {
        if (r.snr_db == snr && r.condition == cond) {
          sum += r.value;
          ++n;
        }
      }
      if (n > 0) out.push_back({snr, cond, metric, sum / static_cast<double>(n), n, seed});
    }
  }
  return out;
}

void write_snr_report(const std::filesystem::path& path, const std::vector<SnrReportRow>& rows) {
  CsvWriter w(path, {"snr_db", "condition", "metric", "mean", "count", "seed"});
  for (const SnrReportRow& r : rows) {
    w.row({format_real(r.snr_db), r.condition, r.metric, format_real(r.mean),
           std::to_string(r.count), std::to_string(r.seed)});
  }
  w.close();
}

std::vector<SnrReportRow> read_snr_report(const std::filesystem::path& path) {
  CsvTable t = read_csv(path);
  const std::size_t cs = t.column("snr_db"), cc = t.column("condition"),
                    cm = t.column("metric"), cmean = t.column("mean"),
                    cn = t.column("count"), cseed = t.column("seed");
  std::vector<SnrReportRow> out;
  for (const auto& r : t.rows) {
    out.push_back({std::stod(r[cs]), r[cc], r[cm], std::stod(r[cmean]), std::stoul(r[cn]),
                   std::stoull(r[cseed])});
  }
  return out;
}

void write_row_values(const std::filesystem::path& path, const std::string& metric,
                      const std::vector<RowValue>& rows) {
  CsvWriter w(path, {"id", "snr_db", "noise_type", "condition", metric});
  for (const RowValue& r : rows) {
    w.row({r.id, format_real(r.snr_db), r.noise_type, r.condition, format_real(r.value)});
  }
  w.close();
}

std::vector<RowValue> read_row_values(const std::filesystem::path& path,
                                      const std::string& metric) {
  CsvTable t = read_csv(path);
  const std::size_t ci = t.column("id"), cs = t.column("snr_db"), cn = t.column("noise_type"),
                    cc = t.column("condition"), cv = t.column(metric);
  std::vector<RowValue> out;
  for (const auto& r : t.rows) {
    out.push_back({r[ci], std::stod(r[cs]), r[cn], r[cc], std::stod(r[cv])});
  }
  return out;
}

double overall_mean(const std::vector<SnrReportRow>& rows, const std::string& condition) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const SnrReportRow& r : rows) {
    if (r.condition != condition) continue;
    sum += r.mean * static_cast<double>(r.count);
    n += r.count;
  }
  if (n == 0) fail("no report rows for condition ", condition);
  return sum / static_cast<double>(n);
}

const SnrReportRow& report_cell(const std::vector<SnrReportRow>& rows, double snr_db,
                                const std::string& condition) {
  for (const SnrReportRow& r : rows) {
    if (r.snr_db == snr_db && r.condition == condition) return r;
  }
  fail("no report row for snr ", snr_db, " condition ", condition);
}

}  // namespace cleancoder::report
