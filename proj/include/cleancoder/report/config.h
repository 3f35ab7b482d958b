// include/cleancoder/report/config.h

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

#ifndef CLEANCODER_REPORT_CONFIG_H_
#define CLEANCODER_REPORT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "cleancoder/corpus/builder.h"
#include "cleancoder/encoder/conformer.h"
#include "cleancoder/trainer/train.h"

namespace cleancoder::report {

// Encoder presets: "large-mini" (D=64) and "medium-mini" (D=48).
encoder::EncoderConfig encoder_preset(const std::string& size);

struct EvalConfig {
  std::size_t threads = 0;  // 0: CLEANCODER_THREADS or hardware concurrency
};

// JSON document with top-level keys corpus, encoder, frontend, asr, eval and
// seed. Every section is optional; unknown keys raise ConfigError.
//
//   asr: {"pretrain": {train fields}, "scratch": {train fields}}
//   encoder: {"size": "large-mini", plus any EncoderConfig field}
//   train fields: epochs, batch_size, lr, scheduler ("constant" | "noam"),
//                 warmup_steps, min_lr, eval_every, weight_decay, stop_at_val_wer
struct ExperimentConfig {
  std::uint64_t seed = 1;
  corpus::CorpusConfig corpus;
  std::string encoder_size = "large-mini";
  encoder::EncoderConfig encoder;
  trainer::TrainConfig frontend;
  trainer::TrainConfig pretrain;
  trainer::TrainConfig scratch;
  EvalConfig eval;

  ExperimentConfig();
  // Propagates `seed` into the training sections.
  void set_seed(std::uint64_t s);
  void validate() const;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
// Resolved configuration, every field explicit.
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

}  // namespace cleancoder::report

#endif  // CLEANCODER_REPORT_CONFIG_H_
