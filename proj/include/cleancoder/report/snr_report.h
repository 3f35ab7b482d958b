// include/cleancoder/report/snr_report.h

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

#ifndef CLEANCODER_REPORT_SNR_REPORT_H_
#define CLEANCODER_REPORT_SNR_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cleancoder::report {

// One per-utterance measurement.
struct RowValue {
  std::string id;
  double snr_db = 0.0;
  std::string noise_type;
  std::string condition;
  double value = 0.0;
};

struct SnrReportRow {
  double snr_db = 0.0;
  std::string condition;
  std::string metric;  // mae | wer | ctc_loss
  double mean = 0.0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

// Groups by (snr, condition): SNRs ascending, conditions in first-seen order.
std::vector<SnrReportRow> snr_report(const std::vector<RowValue>& rows, const std::string& metric,
                                     std::uint64_t seed);

// Columns snr_db, condition, metric, mean, count, seed.
void write_snr_report(const std::filesystem::path& path, const std::vector<SnrReportRow>& rows);
std::vector<SnrReportRow> read_snr_report(const std::filesystem::path& path);

// Columns id, snr_db, noise_type, condition, <metric>.
void write_row_values(const std::filesystem::path& path, const std::string& metric,
                      const std::vector<RowValue>& rows);
std::vector<RowValue> read_row_values(const std::filesystem::path& path, const std::string& metric);

// Mean of `mean` weighted by `count` for one condition across SNRs.
double overall_mean(const std::vector<SnrReportRow>& rows, const std::string& condition);
// The row for (snr, condition); fails when absent.
const SnrReportRow& report_cell(const std::vector<SnrReportRow>& rows, double snr_db,
                                const std::string& condition);

}  // namespace cleancoder::report

#endif  // CLEANCODER_REPORT_SNR_REPORT_H_
