// src/report/config.cc

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

#include "cleancoder/report/config.h"

#include <fstream>
#include <set>

#include "cleancoder/error.h"
#include "cleancoder/trainer/model_io.h"

namespace cleancoder::report {
namespace {

using nlohmann::json;

// Reads keys from one JSON object and rejects the ones nobody asked for.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where_ + "." + key + ": wrong type");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const json& sub(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void read_train(Section s, trainer::TrainConfig& t) {
  std::string scheduler = t.scheduler == trainer::Scheduler::kNoam ? "noam" : "constant";
  s.read("epochs", t.epochs);
  s.read("batch_size", t.batch_size);
  s.read("lr", t.lr);
  s.read("scheduler", scheduler);
  s.read("warmup_steps", t.warmup_steps);
  s.read("min_lr", t.min_lr);
  s.read("eval_every", t.eval_every);
  s.read("weight_decay", t.weight_decay);
  s.read("stop_at_val_wer", t.stop_at_val_wer);
  s.finish();
  if (scheduler == "noam") {
    t.scheduler = trainer::Scheduler::kNoam;
  } else if (scheduler == "constant") {
    t.scheduler = trainer::Scheduler::kConstant;
  } else {
    throw ConfigError("unknown scheduler '" + scheduler + "'");
  }
}

nlohmann::ordered_json train_json(const trainer::TrainConfig& t) {
  return {{"epochs", t.epochs},
          {"batch_size", t.batch_size},
          {"lr", t.lr},
          {"scheduler", t.scheduler == trainer::Scheduler::kNoam ? "noam" : "constant"},
          {"warmup_steps", t.warmup_steps},
          {"min_lr", t.min_lr},
          {"eval_every", t.eval_every},
          {"weight_decay", t.weight_decay},
          {"stop_at_val_wer", t.stop_at_val_wer}};
}

}  // namespace

encoder::EncoderConfig encoder_preset(const std::string& size) {
  encoder::EncoderConfig c;
  if (size == "large-mini") {
    c.d_model = 64;
  } else if (size == "medium-mini") {
    c.d_model = 48;
  } else {
    throw ConfigError("unknown encoder size '" + size + "' (large-mini | medium-mini)");
  }
  return c;
}

ExperimentConfig::ExperimentConfig() : encoder(encoder_preset("large-mini")) {
  frontend.epochs = 40;
  frontend.batch_size = 16;
  frontend.lr = 1e-3;
  frontend.scheduler = trainer::Scheduler::kConstant;
  frontend.weight_decay = 1e-4;

  pretrain.epochs = 30;
  pretrain.batch_size = 16;
  pretrain.lr = 0.05;
  pretrain.scheduler = trainer::Scheduler::kNoam;
  pretrain.warmup_steps = 500;
  pretrain.min_lr = 1e-6;
  pretrain.weight_decay = 1e-4;
  pretrain.stop_at_val_wer = 0.15;

  scratch = pretrain;
  scratch.stop_at_val_wer = -1.0;
  set_seed(seed);
}

void ExperimentConfig::set_seed(std::uint64_t s) {
  seed = s;
  frontend.seed = pretrain.seed = scratch.seed = s;
}

void ExperimentConfig::validate() const {
  corpus.validate();
  encoder.validate();
  frontend.validate();
  pretrain.validate();
  scratch.validate();
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  Section top(doc, "config");
  std::uint64_t seed = cfg.seed;
  top.read("seed", seed);

  if (top.has("corpus")) {
    Section s(top.sub("corpus"), "corpus");
    corpus::CorpusConfig& c = cfg.corpus;
    s.read("train", c.train);
    s.read("val", c.val);
    s.read("test", c.test);
    s.read("train_speakers", c.train_speakers);
    s.read("val_speakers", c.val_speakers);
    s.read("test_speakers", c.test_speakers);
    s.read("min_words", c.min_words);
    s.read("max_words", c.max_words);
    s.read("snr_grid", c.snr_grid);
    s.read("seed", c.seed);
    std::vector<std::string> kinds;
    s.read("noise_kinds", kinds);
    s.finish();
    if (!kinds.empty()) {
      c.noise_kinds.clear();
      for (const std::string& k : kinds) {
        try {
          c.noise_kinds.push_back(corpus::parse_noise_kind(k));
        } catch (const Error& e) {
          throw ConfigError(std::string("corpus.noise_kinds: ") + e.what());
        }
      }
    }
  }

  if (top.has("encoder")) {
    Section s(top.sub("encoder"), "encoder");
    s.read("size", cfg.encoder_size);
    cfg.encoder = encoder_preset(cfg.encoder_size);
    encoder::EncoderConfig& e = cfg.encoder;
    s.read("d_model", e.d_model);
    s.read("n_blocks", e.n_blocks);
    s.read("n_heads", e.n_heads);
    s.read("conv_kernel", e.conv_kernel);
    s.read("ffn_expansion", e.ffn_expansion);
    s.read("rel_clip", e.rel_clip);
    s.finish();
  }

  if (top.has("frontend")) read_train(Section(top.sub("frontend"), "frontend"), cfg.frontend);

  if (top.has("asr")) {
    Section s(top.sub("asr"), "asr");
    if (s.has("pretrain")) read_train(Section(s.sub("pretrain"), "asr.pretrain"), cfg.pretrain);
    if (s.has("scratch")) read_train(Section(s.sub("scratch"), "asr.scratch"), cfg.scratch);
    s.finish();
  }

  if (top.has("eval")) {
    Section s(top.sub("eval"), "eval");
    s.read("threads", cfg.eval.threads);
    s.finish();
  }
  top.finish();
  cfg.set_seed(seed);
  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  const corpus::CorpusConfig& c = cfg.corpus;
  std::vector<std::string> kinds;
  for (corpus::NoiseKind k : c.noise_kinds) kinds.push_back(corpus::to_string(k));
  j["corpus"] = {{"train", c.train},
                 {"val", c.val},
                 {"test", c.test},
                 {"train_speakers", c.train_speakers},
                 {"val_speakers", c.val_speakers},
                 {"test_speakers", c.test_speakers},
                 {"min_words", c.min_words},
                 {"max_words", c.max_words},
                 {"snr_grid", c.snr_grid},
                 {"noise_kinds", kinds},
                 {"seed", c.seed}};
  j["encoder"] = {{"size", cfg.encoder_size}};
  const auto enc = trainer::encoder_config_json(cfg.encoder);
  for (const auto& [k, v] : enc.items()) {
    if (k != "input_dim") j["encoder"][k] = v;
  }
  j["frontend"] = train_json(cfg.frontend);
  j["asr"] = {{"pretrain", train_json(cfg.pretrain)}, {"scratch", train_json(cfg.scratch)}};
  j["eval"] = {{"threads", cfg.eval.threads}};
  return j;
}

}  // namespace cleancoder::report
