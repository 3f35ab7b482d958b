// include/cleancoder/encoder/conformer.h

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

#ifndef CLEANCODER_ENCODER_CONFORMER_H_
#define CLEANCODER_ENCODER_CONFORMER_H_

#include <string>
#include <vector>

#include "cleancoder/numgrad/graph.h"
#include "cleancoder/numgrad/param_store.h"
#include "cleancoder/numgrad/rng.h"

namespace cleancoder::encoder {

using numgrad::Graph;
using numgrad::ParamStore;
using numgrad::Tensor;
using numgrad::Var;

struct EncoderConfig {
  std::size_t input_dim = 80;
  std::size_t d_model = 64;
  std::size_t n_blocks = 4;
  std::size_t n_heads = 4;
  std::size_t conv_kernel = 15;
  std::size_t ffn_expansion = 4;
  std::size_t rel_clip = 64;  // relative distances clipped to [-rel_clip, rel_clip]

  void validate() const;  // throws ConfigError
};

inline const std::string kEncoderPrefix = "enc.";

// T' after two kernel-3, stride-2, pad-1 convolutions: ceil(T / 4).
std::size_t subsampled_length(std::size_t frames);

// Registers every encoder tensor under "enc." in a fixed order.
void init_encoder(ParamStore& store, const EncoderConfig& cfg, numgrad::Rng& rng);

// y = x W + b with W: (in, out), b: (out).
Var linear(Graph& g, ParamStore& store, const std::string& prefix, Var x);

struct BlockHooks {
  bool name_attention = false;  // names softmax outputs "<prefix>att.probs<h>"
};

// One Conformer block on a (len, D) sequence. `prefix` ends with '.'.
Var conformer_block(Graph& g, ParamStore& store, const EncoderConfig& cfg,
                    const std::string& prefix, Var x, std::size_t len,
                    const BlockHooks& hooks = {});

// x: (T, input_dim) -> (T', D).
Var subsample(Graph& g, ParamStore& store, const EncoderConfig& cfg, Var x);

struct EncoderOutputs {
  std::vector<Var> taps;  // one per block, each (T', D)
  std::size_t t_prime = 0;
};

EncoderOutputs build_encoder(Graph& g, ParamStore& store, const EncoderConfig& cfg, Var x,
                             std::size_t frames, const BlockHooks& hooks = {});

struct LatentTapStack {
  std::vector<Tensor> taps;
  std::size_t t_prime = 0;
};

// Forward-only pass on a normalized (T, input_dim) spectrogram. Reads the
// store without modifying it, so concurrent calls on one store are safe.
LatentTapStack encode_with_taps(const ParamStore& store, const EncoderConfig& cfg,
                                const Tensor& spec);

std::vector<std::string> encoder_param_names(const ParamStore& store);

}  // namespace cleancoder::encoder

#endif  // CLEANCODER_ENCODER_CONFORMER_H_
