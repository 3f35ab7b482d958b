// include/cleancoder/asr/model.h

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

#ifndef CLEANCODER_ASR_MODEL_H_
#define CLEANCODER_ASR_MODEL_H_

#include <vector>

#include "cleancoder/dsp/mel.h"
#include "cleancoder/encoder/conformer.h"

namespace cleancoder::asr {

using numgrad::Graph;
using numgrad::ParamStore;
using numgrad::Tensor;
using numgrad::Var;

// Blank plus the 12 corpus symbols.
inline constexpr std::size_t kVocabSize = 13;

// Conformer encoder with a linear CTC head ("ctc.w", "ctc.b") on the last tap.
struct AsrModel {
  encoder::EncoderConfig config;
  ParamStore params;
  dsp::FeatureStats stats;
};

void init_asr_model(AsrModel& model, std::uint64_t seed);

struct AsrGraph {
  encoder::EncoderOutputs enc;
  Var head_input;  // the last encoder tap
  Var logits;
  Var log_probs;
};

// x: normalized (frames, 80).
AsrGraph build_asr(Graph& g, AsrModel& model, Var x, std::size_t frames);

// Forward-only; safe to call concurrently on one model.
Tensor asr_log_probs(const AsrModel& model, const Tensor& normalized);
std::vector<int> transcribe(const AsrModel& model, const dsp::MelSpectrogram& raw);

}  // namespace cleancoder::asr

#endif  // CLEANCODER_ASR_MODEL_H_
