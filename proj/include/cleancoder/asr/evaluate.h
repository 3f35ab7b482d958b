// include/cleancoder/asr/evaluate.h

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

#ifndef CLEANCODER_ASR_EVALUATE_H_
#define CLEANCODER_ASR_EVALUATE_H_

#include <filesystem>
#include <string>
#include <vector>

#include "cleancoder/asr/model.h"
#include "cleancoder/corpus/batching.h"
#include "cleancoder/corpus/manifest.h"
#include "cleancoder/frontend/model.h"

namespace cleancoder::asr {

struct RowResult {
  std::string id;
  double snr_db = 0.0;
  std::string noise_type;
  std::string condition;
  double wer = 0.0;
  std::string ref;
  std::string hyp;
};

struct RowError {
  std::string id;
  std::string message;
};

struct EvalRun {
  std::vector<RowResult> rows;  // manifest order, errored rows omitted
  std::vector<RowError> errors;
};

struct EvalOptions {
  corpus::InputSource source = corpus::InputSource::kNoisy;
  const frontend::CleancoderModel* frontend = nullptr;  // optional denoiser
  std::string condition = "noisy-baseline";
};

// Per row: features -> (frontend) -> encoder -> CTC head -> greedy -> WER.
EvalRun evaluate_model(const AsrModel& model, const std::vector<corpus::ManifestRow>& rows,
                       const EvalOptions& options);

double mean_wer(const std::vector<RowResult>& rows);

// Columns: id,snr_db,noise_type,condition,wer,ref,hyp.
void write_wer_rows(const std::filesystem::path& path, const std::vector<RowResult>& rows);

}  // namespace cleancoder::asr

#endif  // CLEANCODER_ASR_EVALUATE_H_
