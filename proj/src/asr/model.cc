// src/asr/model.cc

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

#include "cleancoder/asr/model.h"

#include "cleancoder/asr/ctc.h"
#include "cleancoder/numgrad/rng.h"

namespace cleancoder::asr {

void init_asr_model(AsrModel& model, std::uint64_t seed) {
  numgrad::Rng rng(numgrad::derive_seed(seed, 0xA5));
  model.params = ParamStore();
  encoder::init_encoder(model.params, model.config, rng);
  model.params.add("ctc.w", numgrad::xavier_uniform(model.config.d_model, kVocabSize, rng));
  model.params.add("ctc.b", Tensor({kVocabSize}));
}

AsrGraph build_asr(Graph& g, AsrModel& model, Var x, std::size_t frames) {
  AsrGraph out;
  out.enc = encoder::build_encoder(g, model.params, model.config, x, frames);
  out.head_input = out.enc.taps.back();
  out.logits = encoder::linear(g, model.params, "ctc.", out.head_input);
  out.log_probs = g.log_softmax(out.logits);
  return out;
}

Tensor asr_log_probs(const AsrModel& model, const Tensor& normalized) {
  Graph g;
  // Forward-only: parameter tensors are read, never written.
  AsrGraph a = build_asr(g, const_cast<AsrModel&>(model), g.constant(normalized),
                         normalized.rows());
  g.forward();
  return g.value(a.log_probs);
}

std::vector<int> transcribe(const AsrModel& model, const dsp::MelSpectrogram& raw) {
  return greedy_decode(asr_log_probs(model, dsp::normalize(raw, model.stats).to_tensor()));
}

}  // namespace cleancoder::asr
