// include/cleancoder/frontend/model.h

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

#ifndef CLEANCODER_FRONTEND_MODEL_H_
#define CLEANCODER_FRONTEND_MODEL_H_

#include <string>
#include <vector>

#include "cleancoder/dsp/mel.h"
#include "cleancoder/encoder/conformer.h"
#include "cleancoder/numgrad/graph.h"

namespace cleancoder::frontend {

using numgrad::Graph;
using numgrad::ParamStore;
using numgrad::Tensor;
using numgrad::Var;

inline constexpr std::size_t kNumNets = 4;        // N1..N4, one per subsampled offset
inline constexpr std::size_t kHighwayLayers = 4;
inline constexpr double kGateBiasInit = -1.0;
inline constexpr double kProjectionNoise = 1e-3;

// Frozen encoder plus the trainable extraction and decoder.
struct CleancoderModel {
  encoder::EncoderConfig encoder_config;
  ParamStore encoder;  // enc.* tensors, never updated here
  ParamStore params;   // pws.* and hw* tensors
  dsp::FeatureStats stats;
};

// Registers pws.W.{b}, pws.c.{b}, hw{k}.P, hw{k}.Pb, hw{k}.layer{j}.{WH,bH,WG,bG}
// (1-based) in that order.
void init_decoder_params(ParamStore& params, std::size_t n_blocks, std::size_t d_model,
                         numgrad::Rng& rng);

// B * (D^2 + D) + 4 * (80 D + 80 + 4 * 2 * (80^2 + 80)).
std::size_t decoder_param_count(std::size_t n_blocks, std::size_t d_model);

// out = sum_b (tap_b W_b + c_b); taps are (T', D).
Var parallel_weighted_sum(Graph& g, ParamStore& params, const std::vector<Var>& taps);

// Net k (1-based) applied row-wise: (n, D) -> (n, 80).
Var highway_net(Graph& g, ParamStore& params, std::size_t k, Var s);

// (T', D) -> (4 T', 80) with row 4i + k - 1 = N_k(s_i).
Var decode_frames(Graph& g, ParamStore& params, Var latent);

// Taps -> PWS -> decode -> trim to `frames` rows.
Var decode_taps(Graph& g, ParamStore& params, const std::vector<Var>& taps, std::size_t frames);

// Masked mean absolute error; mask has one entry per row of pred.
Var l1_loss(Graph& g, Var pred, Var target, const std::vector<double>& row_mask);

// Whole model in one graph on a normalized (T, 80) input. Encoder parameters
// are registered as graph parameters and frozen.
Var build_cleancoder(Graph& g, CleancoderModel& model, Var x, std::size_t frames);

// Normalized (T, 80) -> normalized (T, 80).
Tensor denoise_normalized(const CleancoderModel& model, const Tensor& x);
// Normalized decoder output for precomputed taps.
Tensor decode_from_taps(const CleancoderModel& model, const encoder::LatentTapStack& taps,
                        std::size_t frames);

// normalize -> encoder taps -> PWS -> decode -> trim -> denormalize.
dsp::MelSpectrogram cleancoder_forward(const CleancoderModel& model,
                                       const dsp::MelSpectrogram& noisy);

}  // namespace cleancoder::frontend

#endif  // CLEANCODER_FRONTEND_MODEL_H_
