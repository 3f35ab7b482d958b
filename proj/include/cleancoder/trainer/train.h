// include/cleancoder/trainer/train.h

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

#ifndef CLEANCODER_TRAINER_TRAIN_H_
#define CLEANCODER_TRAINER_TRAIN_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cleancoder/asr/model.h"
#include "cleancoder/corpus/batching.h"
#include "cleancoder/frontend/model.h"

namespace cleancoder::trainer {

enum class Scheduler { kConstant, kNoam };

struct TrainConfig {
  std::size_t epochs = 40;
  std::size_t batch_size = 16;
  double lr = 1e-3;  // peak lr under noam
  Scheduler scheduler = Scheduler::kConstant;
  std::size_t warmup_steps = 500;
  double min_lr = 1e-6;
  std::uint64_t seed = 1;
  std::size_t eval_every = 0;  // steps; 0 evaluates once per epoch
  double weight_decay = 1e-4;
  double stop_at_val_wer = -1.0;  // ASR only; stop once val WER <= this (negative: never)

  void validate() const;
};

// Learning rate for 1-based optimizer step `step`.
double learning_rate(const TrainConfig& cfg, std::size_t step);

struct MetricRow {
  std::size_t step = 0;
  std::string split;
  std::string metric;
  double value = 0.0;
};

// Long-format metric log: step, split, metric, value, seed.
struct MetricLog {
  std::uint64_t seed = 0;
  std::vector<MetricRow> rows;

  void add(std::size_t step, const std::string& split, const std::string& metric, double value) {
    rows.push_back({step, split, metric, value});
  }
  void write(const std::filesystem::path& path) const;
};

struct CurvePoint {
  std::size_t step = 0;
  double val_ctc = 0.0;
  double val_wer = 0.0;
};

// Columns step, val_ctc, val_wer.
void write_curves(const std::filesystem::path& path, const std::vector<CurvePoint>& curve);
std::vector<CurvePoint> read_curves(const std::filesystem::path& path);

// Per-bin statistics over the noisy inputs and clean targets of the training
// utterances, rounded to float so they survive a checkpoint round trip.
dsp::FeatureStats corpus_stats(const std::vector<corpus::Utterance>& train);

// ---------------------------------------------------------------------------
// Frontend.

struct FrontendTrainResult {
  frontend::CleancoderModel model;  // best-validation decoder, float-rounded
  double init_val_l1 = 0.0;
  double best_val_l1 = 0.0;
  std::size_t best_step = 0;
  std::size_t steps = 0;
  MetricLog log;
};

// Trains pws.* and hw* on (noisy input, clean target) pairs with masked L1 in
// the normalized domain. The encoder is never written. Utterances must carry
// targets.
FrontendTrainResult train_frontend(const frontend::CleancoderModel& init,
                                   const std::vector<corpus::Utterance>& train,
                                   const std::vector<corpus::Utterance>& val,
                                   const TrainConfig& cfg);

// Frame-weighted normalized-domain L1 of the model on `data`.
double frontend_val_l1(const frontend::CleancoderModel& model,
                       const std::vector<corpus::Utterance>& data);

// ---------------------------------------------------------------------------
// ASR.

struct AsrTrainResult {
  asr::AsrModel model;  // best-validation-WER weights, float-rounded
  double best_val_wer = 0.0;
  std::size_t best_step = 0;
  std::size_t steps = 0;
  std::vector<CurvePoint> curve;
  MetricLog log;
};

// Trains encoder + CTC head from scratch on the utterances' inputs.
AsrTrainResult train_asr(const encoder::EncoderConfig& encoder_config,
                         const dsp::FeatureStats& stats,
                         const std::vector<corpus::Utterance>& train,
                         const std::vector<corpus::Utterance>& val, const TrainConfig& cfg);

struct AsrValidation {
  double ctc = 0.0;  // mean per-utterance CTC loss
  double wer = 0.0;  // mean per-utterance WER
};
AsrValidation validate_asr(const asr::AsrModel& model, const std::vector<corpus::Utterance>& data);

// Copies of `data` whose inputs are replaced by the frontend's denoised output.
std::vector<corpus::Utterance> apply_frontend(const frontend::CleancoderModel& model,
                                              const std::vector<corpus::Utterance>& data);

}  // namespace cleancoder::trainer

#endif  // CLEANCODER_TRAINER_TRAIN_H_
