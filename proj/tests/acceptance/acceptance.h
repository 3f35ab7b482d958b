// tests/acceptance/acceptance.h

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

#ifndef CLEANCODER_TESTS_ACCEPTANCE_ACCEPTANCE_H_
#define CLEANCODER_TESTS_ACCEPTANCE_ACCEPTANCE_H_

#include <filesystem>
#include <string>
#include <vector>

namespace cleancoder::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

CriterionResult check_gradient_suite();  // 1
CriterionResult check_ctc_oracle();      // 2
CriterionResult check_wer_oracle();      // 3
CriterionResult check_snr_mixer();       // 4
CriterionResult check_shapes();          // 5

struct PipelineOptions {
  std::filesystem::path work_dir;
  std::string cli;             // path of the cleancoder executable
  bool reuse = false;          // keep finished stage outputs from an earlier run
  std::vector<std::uint64_t> seeds{1, 2, 3};  // seed 1 always runs (it owns the corpus)
};

// Criteria 6-10 from one set of desk-scale runs.
std::vector<CriterionResult> check_pipeline(const PipelineOptions& options);

std::string format(const char* fmt, ...);

}  // namespace cleancoder::acceptance

#endif  // CLEANCODER_TESTS_ACCEPTANCE_ACCEPTANCE_H_
