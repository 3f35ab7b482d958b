// include/cleancoder/report/pipeline.h

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

#ifndef CLEANCODER_REPORT_PIPELINE_H_
#define CLEANCODER_REPORT_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cleancoder/corpus/batching.h"
#include "cleancoder/report/config.h"
#include "cleancoder/report/snr_report.h"

namespace cleancoder::report {

namespace fs = std::filesystem;

// Fixed file names inside stage output directories.
inline constexpr const char* kAsrCheckpoint = "asr.ckpt";
inline constexpr const char* kFrontendCheckpoint = "frontend.ckpt";
inline constexpr const char* kMetricsCsv = "metrics.csv";
inline constexpr const char* kCurvesCsv = "curves.csv";
inline constexpr const char* kConfigJson = "config.json";

// Manifest of one split; fails with a hint to run gen-corpus when absent.
fs::path require_manifest(const fs::path& corpus_dir, const std::string& split);
// Fails naming `stage` when `path` does not exist.
void require_artifact(const fs::path& path, const std::string& stage);

corpus::CorpusSummary run_gen_corpus(const ExperimentConfig& cfg, const fs::path& out_dir);

struct StageResult {
  double best_val = 0.0;  // WER for ASR stages, L1 for the frontend
  double init_val = 0.0;
  std::size_t steps = 0;
  std::size_t best_step = 0;
};

// Clean-input ASR; writes asr.ckpt, metrics.csv, curves.csv, config.json.
StageResult run_pretrain(const ExperimentConfig& cfg, const fs::path& corpus_dir,
                         const fs::path& out_dir);

// Frontend on a frozen pretrained encoder; writes frontend.ckpt, metrics.csv.
StageResult run_train_frontend(const ExperimentConfig& cfg, const fs::path& corpus_dir,
                               const fs::path& backbone_ckpt, const fs::path& out_dir);

// From-scratch ASR on noisy inputs, optionally denoised by a frozen frontend.
StageResult run_train_asr(const ExperimentConfig& cfg, const fs::path& corpus_dir,
                          const std::optional<fs::path>& frontend_ckpt, const fs::path& out_dir);

struct EvalOutputs {
  std::vector<RowValue> rows;
  std::vector<SnrReportRow> report;
  std::size_t failed_rows = 0;
};

// Writes mae_rows.csv, mae_report.csv, mae.svg. Conditions noisy, denoised.
EvalOutputs run_eval_mae(const fs::path& frontend_ckpt, const fs::path& manifest,
                         const fs::path& out_dir, std::uint64_t seed);

// Writes wer_rows.csv, wer_report.csv, wer.svg. Conditions noisy-baseline and,
// with a frontend, frontend-denoised; a clean source uses condition "clean".
EvalOutputs run_eval_wer(const fs::path& asr_ckpt, const std::optional<fs::path>& frontend_ckpt,
                         const fs::path& manifest, const fs::path& out_dir, std::uint64_t seed,
                         corpus::InputSource source = corpus::InputSource::kNoisy);

// Two panels (val_ctc, val_wer), one polyline per log in argument order.
void run_plot_curves(const std::vector<fs::path>& logs, const std::vector<std::string>& labels,
                     const fs::path& out_svg);

}  // namespace cleancoder::report

#endif  // CLEANCODER_REPORT_PIPELINE_H_
