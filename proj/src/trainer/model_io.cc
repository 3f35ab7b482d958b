// src/trainer/model_io.cc

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

#include "cleancoder/trainer/model_io.h"

#include "cleancoder/error.h"

namespace cleancoder::trainer {
namespace {

constexpr const char* kMeanName = "norm.mean";
constexpr const char* kStdName = "norm.std";

void add_stats(numgrad::ParamStore& out, const dsp::FeatureStats& stats) {
  const std::size_t f = stats.mean.size();
  out.add(kMeanName, numgrad::Tensor({f}, stats.mean));
  out.add(kStdName, numgrad::Tensor({f}, stats.stddev));
}

dsp::FeatureStats take_stats(const numgrad::ParamStore& in, const std::filesystem::path& path) {
  if (!in.contains(kMeanName) || !in.contains(kStdName)) {
    fail("checkpoint ", path.string(), " has no feature statistics");
  }
  auto vec = [&](const char* name) {
    auto v = in.get(name).values();
    return std::vector<double>(v.begin(), v.end());
  };
  return {vec(kMeanName), vec(kStdName)};
}

std::string kind_of(const LoadedCheckpoint& ck) {
  return ck.meta.contains("kind") ? ck.meta.at("kind").get<std::string>() : std::string();
}

void copy_tensors(numgrad::ParamStore& into, const numgrad::ParamStore& from,
                  const std::filesystem::path& path) {
  for (const std::string& name : into.names()) {
    if (!from.contains(name)) fail("checkpoint ", path.string(), " lacks tensor ", name);
    if (from.get(name).shape() != into.get(name).shape()) {
      fail("checkpoint ", path.string(), ": tensor ", name, " has shape ",
           numgrad::shape_string(from.get(name).shape()), ", model expects ",
           numgrad::shape_string(into.get(name).shape()));
    }
    into.get(name) = from.get(name);
  }
}

}  // namespace

Json encoder_config_json(const encoder::EncoderConfig& c) {
  return {{"input_dim", c.input_dim},     {"d_model", c.d_model},
          {"n_blocks", c.n_blocks},       {"n_heads", c.n_heads},
          {"conv_kernel", c.conv_kernel}, {"ffn_expansion", c.ffn_expansion},
          {"rel_clip", c.rel_clip}};
}

encoder::EncoderConfig encoder_config_from_json(const Json& j) {
  encoder::EncoderConfig c;
  c.input_dim = j.at("input_dim").get<std::size_t>();
  c.d_model = j.at("d_model").get<std::size_t>();
  c.n_blocks = j.at("n_blocks").get<std::size_t>();
  c.n_heads = j.at("n_heads").get<std::size_t>();
  c.conv_kernel = j.at("conv_kernel").get<std::size_t>();
  c.ffn_expansion = j.at("ffn_expansion").get<std::size_t>();
  c.rel_clip = j.at("rel_clip").get<std::size_t>();
  c.validate();
  return c;
}

void save_asr(const std::filesystem::path& path, const asr::AsrModel& model) {
  numgrad::ParamStore all = model.params;
  add_stats(all, model.stats);
  save_checkpoint(path, all, {{"kind", "asr"}, {"encoder", encoder_config_json(model.config)}});
}

asr::AsrModel load_asr(const std::filesystem::path& path) {
  LoadedCheckpoint ck = load_checkpoint(path);
  if (kind_of(ck) != "asr") fail("checkpoint ", path.string(), " is not an ASR model");
  asr::AsrModel model;
  model.config = encoder_config_from_json(ck.meta.at("encoder"));
  asr::init_asr_model(model, 0);
  copy_tensors(model.params, ck.tensors, path);
  model.stats = take_stats(ck.tensors, path);
  return model;
}

void save_frontend(const std::filesystem::path& path, const frontend::CleancoderModel& model) {
  numgrad::ParamStore all = model.encoder;
  for (const std::string& name : model.params.names()) all.add(name, model.params.get(name));
  add_stats(all, model.stats);
  save_checkpoint(path, all,
                  {{"kind", "frontend"}, {"encoder", encoder_config_json(model.encoder_config)}});
}

frontend::CleancoderModel load_frontend(const std::filesystem::path& path) {
  LoadedCheckpoint ck = load_checkpoint(path);
  if (kind_of(ck) != "frontend") fail("checkpoint ", path.string(), " is not a frontend model");
  frontend::CleancoderModel model;
  model.encoder_config = encoder_config_from_json(ck.meta.at("encoder"));
  numgrad::Rng rng(0);
  encoder::init_encoder(model.encoder, model.encoder_config, rng);
  frontend::init_decoder_params(model.params, model.encoder_config.n_blocks,
                                model.encoder_config.d_model, rng);
  copy_tensors(model.encoder, ck.tensors, path);
  copy_tensors(model.params, ck.tensors, path);
  model.stats = take_stats(ck.tensors, path);
  return model;
}

frontend::CleancoderModel frontend_from_asr(const asr::AsrModel& backbone, std::uint64_t seed) {
  frontend::CleancoderModel model;
  model.encoder_config = backbone.config;
  for (const std::string& name : encoder::encoder_param_names(backbone.params)) {
    model.encoder.add(name, backbone.params.get(name));
  }
  numgrad::Rng rng(numgrad::derive_seed(seed, 0xF0));
  frontend::init_decoder_params(model.params, backbone.config.n_blocks, backbone.config.d_model,
                                rng);
  model.stats = backbone.stats;
  return model;
}

}  // namespace cleancoder::trainer
