// src/frontend/model.cc

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

#include "cleancoder/frontend/model.h"

#include <set>

#include "cleancoder/error.h"

namespace cleancoder::frontend {

namespace {

std::string net_prefix(std::size_t k) { return "hw" + std::to_string(k) + "."; }

std::string layer_prefix(std::size_t k, std::size_t j) {
  return net_prefix(k) + "layer" + std::to_string(j) + ".";
}

}  // namespace

void init_decoder_params(ParamStore& params, std::size_t n_blocks, std::size_t d_model,
                         numgrad::Rng& rng) {
  const std::size_t f = dsp::kMelBins;
  for (std::size_t b = 1; b <= n_blocks; ++b) {
    Tensor w({d_model, d_model});
    for (std::size_t i = 0; i < d_model; ++i) {
      for (std::size_t j = 0; j < d_model; ++j) {
        w.at(i, j) = (i == j ? 1.0 / static_cast<double>(n_blocks) : 0.0) +
                     kProjectionNoise * rng.normal();
      }
    }
    params.add("pws.W." + std::to_string(b), std::move(w));
    params.add("pws.c." + std::to_string(b), Tensor({d_model}));
  }
  for (std::size_t k = 1; k <= kNumNets; ++k) {
    params.add(net_prefix(k) + "P", numgrad::xavier_uniform(d_model, f, rng));
    params.add(net_prefix(k) + "Pb", Tensor({f}));
    for (std::size_t j = 1; j <= kHighwayLayers; ++j) {
      const std::string p = layer_prefix(k, j);
      params.add(p + "WH", numgrad::xavier_uniform(f, f, rng));
      params.add(p + "bH", Tensor({f}));
      params.add(p + "WG", numgrad::xavier_uniform(f, f, rng));
      params.add(p + "bG", Tensor({f}, kGateBiasInit));
    }
  }
}

std::size_t decoder_param_count(std::size_t n_blocks, std::size_t d_model) {
  const std::size_t f = dsp::kMelBins;
  return n_blocks * (d_model * d_model + d_model) +
         kNumNets * (d_model * f + f + kHighwayLayers * 2 * (f * f + f));
}

Var parallel_weighted_sum(Graph& g, ParamStore& params, const std::vector<Var>& taps) {
  if (taps.empty()) fail("parallel_weighted_sum: no taps");
  if (params.contains("pws.W." + std::to_string(taps.size() + 1)) ||
      !params.contains("pws.W." + std::to_string(taps.size()))) {
    fail("parallel_weighted_sum: ", taps.size(), " taps do not match the projection count");
  }
  Var out;
  for (std::size_t b = 1; b <= taps.size(); ++b) {
    Var proj = g.add(g.matmul(taps[b - 1], g.parameter(params, "pws.W." + std::to_string(b))),
                     g.parameter(params, "pws.c." + std::to_string(b)));
    out = out.valid() ? g.add(out, proj) : proj;
  }
  return out;
}

Var highway_net(Graph& g, ParamStore& params, std::size_t k, Var s) {
  const std::string np = net_prefix(k);
  Var x = g.add(g.matmul(s, g.parameter(params, np + "P")), g.parameter(params, np + "Pb"));
  for (std::size_t j = 1; j <= kHighwayLayers; ++j) {
    const std::string p = layer_prefix(k, j);
    Var h = g.swish(g.add(g.matmul(x, g.parameter(params, p + "WH")),
                          g.parameter(params, p + "bH")));
    Var gate = g.sigmoid(g.add(g.matmul(x, g.parameter(params, p + "WG")),
                               g.parameter(params, p + "bG")));
    // g*H + (1-g)*x == x + g*(H - x)
    x = g.add(x, g.mul(gate, g.sub(h, x)));
  }
  return x;
}

Var decode_frames(Graph& g, ParamStore& params, Var latent) {
  std::vector<Var> outs;
  for (std::size_t k = 1; k <= kNumNets; ++k) outs.push_back(highway_net(g, params, k, latent));
  return g.interleave_rows(outs);
}

Var decode_taps(Graph& g, ParamStore& params, const std::vector<Var>& taps, std::size_t frames) {
  Var y = decode_frames(g, params, parallel_weighted_sum(g, params, taps));
  return g.slice_rows(y, 0, frames);
}

Var l1_loss(Graph& g, Var pred, Var target, const std::vector<double>& row_mask) {
  return g.masked_mean_abs(pred, target, row_mask);
}

Var build_cleancoder(Graph& g, CleancoderModel& model, Var x, std::size_t frames) {
  encoder::EncoderOutputs enc =
      encoder::build_encoder(g, model.encoder, model.encoder_config, x, frames);
  const auto& names = model.encoder.names();
  g.freeze({names.begin(), names.end()});
  return decode_taps(g, model.params, enc.taps, frames);
}

Tensor decode_from_taps(const CleancoderModel& model, const encoder::LatentTapStack& taps,
                        std::size_t frames) {
  Graph g;
  std::vector<Var> vars;
  for (const Tensor& t : taps.taps) vars.push_back(g.constant(t));
  // Forward-only: parameter tensors are read, never written.
  Var y = decode_taps(g, const_cast<ParamStore&>(model.params), vars, frames);
  g.forward();
  return g.value(y);
}

Tensor denoise_normalized(const CleancoderModel& model, const Tensor& x) {
  encoder::LatentTapStack taps =
      encoder::encode_with_taps(model.encoder, model.encoder_config, x);
  return decode_from_taps(model, taps, x.rows());
}

dsp::MelSpectrogram cleancoder_forward(const CleancoderModel& model,
                                       const dsp::MelSpectrogram& noisy) {
  Tensor x = dsp::normalize(noisy, model.stats).to_tensor();
  return dsp::denormalize(dsp::MelSpectrogram::from_tensor(denoise_normalized(model, x)),
                          model.stats);
}

}  // namespace cleancoder::frontend
