// include/cleancoder/asr/ctc.h

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

#ifndef CLEANCODER_ASR_CTC_H_
#define CLEANCODER_ASR_CTC_H_

#include <vector>

#include "cleancoder/numgrad/graph.h"

namespace cleancoder::asr {

using numgrad::Tensor;

inline constexpr int kBlank = 0;

// Frames needed to emit `target`: its length plus one blank per adjacent
// repeated pair.
std::size_t ctc_min_frames(const std::vector<int>& target);

struct CtcResult {
  double loss = 0.0;   // -log p(target | log_probs)
  Tensor grad;         // d loss / d log_probs, same shape as log_probs
};

// log_probs: (T, V) rows of log-probabilities. Log-space forward-backward over
// the blank-augmented target. Fails with "target unreachable" when T is too
// short.
CtcResult ctc_forward_backward(const Tensor& log_probs, const std::vector<int>& target);
double ctc_loss(const Tensor& log_probs, const std::vector<int>& target);

// Graph node computing the CTC loss of `log_probs` (a scalar), differentiable
// w.r.t. log_probs.
numgrad::Var ctc_loss_node(numgrad::Graph& g, numgrad::Var log_probs, std::vector<int> target);

// Per-frame argmax (lowest id on ties), collapse repeats, drop blanks.
std::vector<int> greedy_decode(const Tensor& log_probs);

}  // namespace cleancoder::asr

#endif  // CLEANCODER_ASR_CTC_H_
