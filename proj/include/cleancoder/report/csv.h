// include/cleancoder/report/csv.h

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

#ifndef CLEANCODER_REPORT_CSV_H_
#define CLEANCODER_REPORT_CSV_H_

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace cleancoder::report {

// Shortest round-trip decimal ("%.17g" trimmed to the fewest digits that
// parse back to the same double).
std::string format_real(double v);

// RFC 4180 quoting when a field contains a comma, quote, or newline.
std::string csv_field(const std::string& s);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // fails when absent
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace cleancoder::report

#endif  // CLEANCODER_REPORT_CSV_H_
