// src/encoder/conformer.cc

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

#include "cleancoder/encoder/conformer.h"

#include <cmath>

#include "cleancoder/error.h"

namespace cleancoder::encoder {

void EncoderConfig::validate() const {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("encoder: " + what);
  };
  need(input_dim >= 1, "input_dim must be >= 1");
  need(d_model >= 1 && n_blocks >= 1 && n_heads >= 1, "d_model, n_blocks, n_heads must be >= 1");
  need(d_model % n_heads == 0, "d_model must be divisible by n_heads");
  need(conv_kernel % 2 == 1, "conv_kernel must be odd");
  need(ffn_expansion >= 1, "ffn_expansion must be >= 1");
  need(rel_clip >= 1, "rel_clip must be >= 1");
}

std::size_t subsampled_length(std::size_t frames) {
  if (frames < 4) fail("subsample: need at least 4 frames, got ", frames);
  auto conv = [](std::size_t t) { return (t + 2 - 3) / 2 + 1; };
  return conv(conv(frames));
}

namespace {

void add_linear(ParamStore& s, const std::string& p, std::size_t in, std::size_t out,
                numgrad::Rng& rng) {
  s.add(p + "w", numgrad::xavier_uniform(in, out, rng));
  s.add(p + "b", Tensor({out}));
}

void add_norm(ParamStore& s, const std::string& p, std::size_t d) {
  s.add(p + "g", Tensor({d}, 1.0));
  s.add(p + "b", Tensor({d}));
}

// Uniform init for a conv kernel with the given fan-in/out.
Tensor conv_init(numgrad::Shape shape, std::size_t fan_in, std::size_t fan_out,
                 numgrad::Rng& rng) {
  Tensor t(std::move(shape));
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : t.values()) v = rng.uniform(-a, a);
  return t;
}

Var norm(Graph& g, ParamStore& s, const std::string& p, Var x) {
  return g.layer_norm(x, g.parameter(s, p + "g"), g.parameter(s, p + "b"));
}

Var feed_forward(Graph& g, ParamStore& s, const std::string& p, Var x) {
  Var h = norm(g, s, p + "ln.", x);
  h = g.swish(linear(g, s, p + "l1.", h));
  h = linear(g, s, p + "l2.", h);
  return g.add(x, g.scale(h, 0.5));
}

Var self_attention(Graph& g, ParamStore& s, const EncoderConfig& cfg, const std::string& p,
                   Var x, std::size_t len, const BlockHooks& hooks) {
  Var h = norm(g, s, p + "ln.", x);
  Var q = linear(g, s, p + "q.", h);
  Var k = g.matmul(h, g.parameter(s, p + "k.w"));  // a key bias cancels in softmax
  Var v = linear(g, s, p + "v.", h);
  Var rel = g.parameter(s, p + "rel");
  const std::size_t dk = cfg.d_model / cfg.n_heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dk));
  std::vector<Var> heads;
  for (std::size_t hd = 0; hd < cfg.n_heads; ++hd) {
    Var qh = g.slice_cols(q, hd * dk, dk);
    Var kh = g.slice_cols(k, hd * dk, dk);
    Var vh = g.slice_cols(v, hd * dk, dk);
    Var scores = g.add(g.scale(g.matmul_nt(qh, kh), inv_sqrt), g.rel_pos_bias(rel, hd, len));
    Var probs = g.softmax(scores);
    if (hooks.name_attention) g.name(probs, p + "probs" + std::to_string(hd));
    heads.push_back(g.matmul(probs, vh));
  }
  Var out = linear(g, s, p + "o.", heads.size() == 1 ? heads[0] : g.concat_cols(heads));
  return g.add(x, out);
}

Var conv_module(Graph& g, ParamStore& s, const EncoderConfig& cfg, const std::string& p,
                Var x) {
  const std::size_t d = cfg.d_model;
  Var h = norm(g, s, p + "ln.", x);
  h = linear(g, s, p + "pw1.", h);
  h = g.mul(g.slice_cols(h, 0, d), g.sigmoid(g.slice_cols(h, d, d)));
  h = g.conv1d(h, g.parameter(s, p + "dw.w"), {1, cfg.conv_kernel / 2, true});
  h = g.add(h, g.parameter(s, p + "dw.b"));
  h = g.swish(norm(g, s, p + "ln2.", h));
  h = linear(g, s, p + "pw2.", h);
  return g.add(x, h);
}

}  // namespace

Var linear(Graph& g, ParamStore& store, const std::string& prefix, Var x) {
  return g.add(g.matmul(x, g.parameter(store, prefix + "w")), g.parameter(store, prefix + "b"));
}

void init_encoder(ParamStore& s, const EncoderConfig& cfg, numgrad::Rng& rng) {
  cfg.validate();
  const std::size_t d = cfg.d_model, f = cfg.d_model * cfg.ffn_expansion;
  const std::string p = kEncoderPrefix;
  s.add(p + "sub.conv1.w", conv_init({3, cfg.input_dim, d}, 3 * cfg.input_dim, d, rng));
  s.add(p + "sub.conv1.b", Tensor({d}));
  s.add(p + "sub.conv2.w", conv_init({3, d, d}, 3 * d, d, rng));
  s.add(p + "sub.conv2.b", Tensor({d}));
  for (std::size_t b = 1; b <= cfg.n_blocks; ++b) {
    const std::string bp = p + "block" + std::to_string(b) + ".";
    add_norm(s, bp + "ff1.ln.", d);
    add_linear(s, bp + "ff1.l1.", d, f, rng);
    add_linear(s, bp + "ff1.l2.", f, d, rng);
    add_norm(s, bp + "att.ln.", d);
    add_linear(s, bp + "att.q.", d, d, rng);
    s.add(bp + "att.k.w", numgrad::xavier_uniform(d, d, rng));
    add_linear(s, bp + "att.v.", d, d, rng);
    add_linear(s, bp + "att.o.", d, d, rng);
    s.add(bp + "att.rel", Tensor({cfg.n_heads, 2 * cfg.rel_clip + 1}));
    add_norm(s, bp + "conv.ln.", d);
    add_linear(s, bp + "conv.pw1.", d, 2 * d, rng);
    s.add(bp + "conv.dw.w", conv_init({cfg.conv_kernel, d}, cfg.conv_kernel, 1, rng));
    s.add(bp + "conv.dw.b", Tensor({d}));
    add_norm(s, bp + "conv.ln2.", d);
    add_linear(s, bp + "conv.pw2.", d, d, rng);
    add_norm(s, bp + "ff2.ln.", d);
    add_linear(s, bp + "ff2.l1.", d, f, rng);
    add_linear(s, bp + "ff2.l2.", f, d, rng);
    add_norm(s, bp + "ln_out.", d);
  }
}

Var conformer_block(Graph& g, ParamStore& store, const EncoderConfig& cfg,
                    const std::string& prefix, Var x, std::size_t len, const BlockHooks& hooks) {
  x = feed_forward(g, store, prefix + "ff1.", x);
  x = self_attention(g, store, cfg, prefix + "att.", x, len, hooks);
  x = conv_module(g, store, cfg, prefix + "conv.", x);
  x = feed_forward(g, store, prefix + "ff2.", x);
  return norm(g, store, prefix + "ln_out.", x);
}

Var subsample(Graph& g, ParamStore& store, const EncoderConfig& /*cfg*/, Var x) {
  const std::string p = kEncoderPrefix + "sub.";
  for (const char* c : {"conv1.", "conv2."}) {
    x = g.conv1d(x, g.parameter(store, p + c + "w"), {2, 1, false});
    x = g.swish(g.add(x, g.parameter(store, p + c + "b")));
  }
  return x;
}

EncoderOutputs build_encoder(Graph& g, ParamStore& store, const EncoderConfig& cfg, Var x,
                             std::size_t frames, const BlockHooks& hooks) {
  EncoderOutputs out;
  out.t_prime = subsampled_length(frames);
  Var h = subsample(g, store, cfg, x);
  for (std::size_t b = 1; b <= cfg.n_blocks; ++b) {
    h = conformer_block(g, store, cfg, kEncoderPrefix + "block" + std::to_string(b) + ".", h,
                        out.t_prime, hooks);
    out.taps.push_back(h);
  }
  return out;
}

LatentTapStack encode_with_taps(const ParamStore& store, const EncoderConfig& cfg,
                                const Tensor& spec) {
  if (spec.rank() != 2 || spec.cols() != cfg.input_dim) {
    fail("encode_with_taps: expected (T, ", cfg.input_dim, ") input, got ",
         numgrad::shape_string(spec.shape()));
  }
  Graph g;
  // Forward-only: the graph reads parameter tensors and never writes them.
  ParamStore& params = const_cast<ParamStore&>(store);
  EncoderOutputs enc = build_encoder(g, params, cfg, g.constant(spec), spec.rows());
  g.forward();
  LatentTapStack stack;
  stack.t_prime = enc.t_prime;
  for (Var t : enc.taps) stack.taps.push_back(g.value(t));
  return stack;
}

std::vector<std::string> encoder_param_names(const ParamStore& store) {
  return store.names_with_prefix(kEncoderPrefix);
}

}  // namespace cleancoder::encoder
