// src/trainer/train.cc

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

#include "cleancoder/trainer/train.h"

#include <cmath>
#include <cstdio>
#include <limits>

#include "cleancoder/asr/ctc.h"
#include "cleancoder/asr/wer.h"
#include "cleancoder/error.h"
#include "cleancoder/log.h"
#include "cleancoder/numgrad/rng.h"
#include "cleancoder/parallel.h"
#include "cleancoder/report/csv.h"
#include "cleancoder/trainer/checkpoint.h"
#include "cleancoder/trainer/optim.h"

namespace cleancoder::trainer {

using corpus::Utterance;
using numgrad::Graph;
using numgrad::Var;

void TrainConfig::validate() const {
  if (epochs == 0) throw ConfigError("train: epochs must be positive");
  if (batch_size == 0) throw ConfigError("train: batch_size must be positive");
  if (!(lr > 0.0)) throw ConfigError("train: lr must be positive");
  if (min_lr < 0.0 || min_lr > lr) throw ConfigError("train: min_lr must lie in [0, lr]");
  if (scheduler == Scheduler::kNoam && warmup_steps == 0) {
    throw ConfigError("train: noam needs warmup_steps > 0");
  }
  if (weight_decay < 0.0) throw ConfigError("train: weight_decay must be >= 0");
}

double learning_rate(const TrainConfig& cfg, std::size_t step) {
  if (cfg.scheduler == Scheduler::kNoam) {
    return noam_lr(step, cfg.lr, cfg.warmup_steps, cfg.min_lr);
  }
  return cfg.lr;
}

void MetricLog::write(const std::filesystem::path& path) const {
  report::CsvWriter w(path, {"step", "split", "metric", "value", "seed"});
  for (const MetricRow& r : rows) {
    w.row({std::to_string(r.step), r.split, r.metric, report::format_real(r.value),
           std::to_string(seed)});
  }
  w.close();
}

void write_curves(const std::filesystem::path& path, const std::vector<CurvePoint>& curve) {
  report::CsvWriter w(path, {"step", "val_ctc", "val_wer"});
  for (const CurvePoint& p : curve) {
    w.row({std::to_string(p.step), report::format_real(p.val_ctc), report::format_real(p.val_wer)});
  }
  w.close();
}

std::vector<CurvePoint> read_curves(const std::filesystem::path& path) {
  report::CsvTable t = report::read_csv(path);
  const std::size_t cs = t.column("step"), cc = t.column("val_ctc"), cw = t.column("val_wer");
  std::vector<CurvePoint> out;
  for (const auto& r : t.rows) {
    out.push_back({std::stoul(r[cs]), std::stod(r[cc]), std::stod(r[cw])});
  }
  return out;
}

dsp::FeatureStats corpus_stats(const std::vector<Utterance>& train) {
  std::vector<dsp::MelSpectrogram> specs;
  for (const Utterance& u : train) {
    specs.push_back(u.input);
    if (u.target.frames() > 0) specs.push_back(u.target);
  }
  if (specs.empty()) fail("corpus_stats: no training utterances");
  dsp::FeatureStats s = dsp::compute_stats(specs);
  for (double& v : s.mean) v = static_cast<float>(v);
  for (double& v : s.stddev) v = static_cast<float>(v);
  return s;
}

namespace {

// Optimizer steps at which validation runs (besides step 0).
bool is_eval_step(const TrainConfig& cfg, std::size_t step, bool epoch_end) {
  return cfg.eval_every == 0 ? epoch_end : step % cfg.eval_every == 0;
}

std::vector<std::vector<std::size_t>> epoch_batches(const std::vector<Utterance>& data,
                                                    const TrainConfig& cfg, std::size_t epoch) {
  corpus::BatchOptions opt;
  opt.batch_size = cfg.batch_size;
  opt.shuffle = true;
  opt.shuffle_seed = numgrad::derive_seed(cfg.seed, 0xE0000 + epoch);
  return corpus::plan_batches(data, opt);
}

// ---- frontend ----

struct FrontendItem {
  std::vector<Tensor> taps;  // (T', D) each
  Tensor target;             // normalized clean, (T, 80)
};

std::vector<FrontendItem> frontend_cache(const frontend::CleancoderModel& model,
                                         const std::vector<Utterance>& data) {
  std::vector<FrontendItem> out(data.size());
  parallel_for(data.size(), [&](std::size_t i) {
    const Utterance& u = data[i];
    if (u.target.frames() != u.input.frames()) {
      fail("utterance ", u.row.id, ": clean target missing or misaligned");
    }
    Tensor x = dsp::normalize(u.input, model.stats).to_tensor();
    out[i].taps = encoder::encode_with_taps(model.encoder, model.encoder_config, x).taps;
    out[i].target = dsp::normalize(u.target, model.stats).to_tensor();
  });
  return out;
}

struct StackedBatch {
  std::vector<Tensor> taps;
  Tensor target;
  std::vector<double> mask;
  std::size_t real_frames = 0;
};

// Stacks the latent rows of several utterances. The decoder is row-wise, so
// utterance n occupies 4 T'_n consecutive output rows; rows past T_n are masked.
StackedBatch stack_items(const std::vector<FrontendItem>& cache,
                         const std::vector<std::size_t>& items) {
  const std::size_t n_taps = cache[items.front()].taps.size();
  const std::size_t d = cache[items.front()].taps[0].cols();
  std::size_t latent_rows = 0;
  for (std::size_t i : items) latent_rows += cache[i].taps[0].rows();
  StackedBatch b;
  b.taps.assign(n_taps, Tensor({latent_rows, d}));
  b.target = Tensor({4 * latent_rows, dsp::kMelBins});
  b.mask.assign(4 * latent_rows, 0.0);
  std::size_t row = 0;
  for (std::size_t i : items) {
    const FrontendItem& it = cache[i];
    const std::size_t tp = it.taps[0].rows();
    for (std::size_t k = 0; k < n_taps; ++k) {
      std::copy(it.taps[k].values().begin(), it.taps[k].values().end(),
                b.taps[k].data() + row * d);
    }
    const std::size_t frames = it.target.rows();
    std::copy(it.target.values().begin(), it.target.values().end(),
              b.target.data() + 4 * row * dsp::kMelBins);
    std::fill(b.mask.begin() + 4 * row, b.mask.begin() + 4 * row + frames, 1.0);
    b.real_frames += frames;
    row += tp;
  }
  return b;
}

Var frontend_batch_loss(Graph& g, ParamStore& params, const StackedBatch& b) {
  std::vector<Var> taps;
  for (const Tensor& t : b.taps) taps.push_back(g.constant(t));
  Var pred = frontend::decode_frames(g, params, frontend::parallel_weighted_sum(g, params, taps));
  return frontend::l1_loss(g, pred, g.constant(b.target), b.mask);
}

double cache_l1(const ParamStore& params, const std::vector<FrontendItem>& cache) {
  constexpr std::size_t kChunk = 32;
  double total = 0.0;
  std::size_t frames = 0;
  for (std::size_t start = 0; start < cache.size(); start += kChunk) {
    std::vector<std::size_t> items;
    for (std::size_t i = start; i < std::min(cache.size(), start + kChunk); ++i) {
      items.push_back(i);
    }
    StackedBatch b = stack_items(cache, items);
    Graph g;
    // Forward-only: parameter tensors are read, never written.
    Var loss = frontend_batch_loss(g, const_cast<ParamStore&>(params), b);
    g.forward();
    total += g.value(loss).data()[0] * static_cast<double>(b.real_frames);
    frames += b.real_frames;
  }
  return frames ? total / static_cast<double>(frames) : 0.0;
}

}  // namespace

double frontend_val_l1(const frontend::CleancoderModel& model,
                       const std::vector<Utterance>& data) {
  return cache_l1(model.params, frontend_cache(model, data));
}

FrontendTrainResult train_frontend(const frontend::CleancoderModel& init,
                                   const std::vector<Utterance>& train,
                                   const std::vector<Utterance>& val, const TrainConfig& cfg) {
  cfg.validate();
  if (train.empty() || val.empty()) fail("train_frontend: empty train or validation set");
  FrontendTrainResult res;
  res.log.seed = cfg.seed;
  frontend::CleancoderModel model = init;
  const ParamStore encoder_before = model.encoder;

  log::info("frontend: caching encoder taps");
  const std::vector<FrontendItem> train_cache = frontend_cache(model, train);
  const std::vector<FrontendItem> val_cache = frontend_cache(model, val);

  Adam adam({0.9, 0.98, 1e-8, cfg.weight_decay});
  ParamStore best = round_to_float(model.params);
  res.init_val_l1 = res.best_val_l1 = cache_l1(best, val_cache);
  res.log.add(0, "val", "l1", res.init_val_l1);

  std::size_t step = 0;
  auto evaluate = [&] {
    ParamStore snap = round_to_float(model.params);
    const double l1 = cache_l1(snap, val_cache);
    res.log.add(step, "val", "l1", l1);
    if (l1 < res.best_val_l1) {
      res.best_val_l1 = l1;
      res.best_step = step;
      best = std::move(snap);
    }
  };

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto batches = epoch_batches(train, cfg, epoch);
    double epoch_loss = 0.0;
    for (std::size_t bi = 0; bi < batches.size(); ++bi) {
      StackedBatch b = stack_items(train_cache, batches[bi]);
      Graph g;
      Var loss = frontend_batch_loss(g, model.params, b);
      g.forward();
      const double lr = learning_rate(cfg, ++step);
      adam.step(model.params, g.backward(loss), lr);
      const double value = g.value(loss).data()[0];
      epoch_loss += value;
      res.log.add(step, "train", "l1", value);
      if (is_eval_step(cfg, step, bi + 1 == batches.size())) evaluate();
    }
    char msg[128];
    std::snprintf(msg, sizeof msg, "frontend epoch %zu/%zu: train l1 %.4f, best val l1 %.4f",
                  epoch + 1, cfg.epochs, epoch_loss / static_cast<double>(batches.size()),
                  res.best_val_l1);
    log::info(msg);
  }
  if (res.log.rows.back().split != "val") evaluate();

  for (const std::string& name : encoder_before.names()) {
    if (!(model.encoder.get(name) == encoder_before.get(name))) {
      fail("train_frontend: frozen encoder tensor ", name, " changed");
    }
  }
  res.steps = step;
  res.model = std::move(model);
  res.model.params = std::move(best);
  return res;
}

// ---- ASR ----

namespace {

struct AsrItem {
  Tensor x;  // normalized input
  const Utterance* utt = nullptr;
};

std::vector<AsrItem> asr_items(const dsp::FeatureStats& stats, const std::vector<Utterance>& data) {
  std::vector<AsrItem> out(data.size());
  parallel_for(data.size(), [&](std::size_t i) {
    out[i].x = dsp::normalize(data[i].input, stats).to_tensor();
    out[i].utt = &data[i];
  });
  return out;
}

bool ctc_reachable(const AsrItem& it) {
  return it.x.rows() >= 4 &&
         encoder::subsampled_length(it.x.rows()) >= asr::ctc_min_frames(it.utt->tokens);
}

AsrValidation validate_items(const asr::AsrModel& model, const std::vector<AsrItem>& items) {
  std::vector<double> ctc(items.size(), 0.0), wer(items.size(), 0.0);
  std::vector<char> reachable(items.size(), 0);
  parallel_for(items.size(), [&](std::size_t i) {
    const Tensor lp = asr::asr_log_probs(model, items[i].x);
    if (ctc_reachable(items[i])) {
      reachable[i] = 1;
      ctc[i] = asr::ctc_loss(lp, items[i].utt->tokens);
    }
    wer[i] = asr::transcript_wer(items[i].utt->row.text, asr::greedy_decode(lp));
  });
  AsrValidation v;
  std::size_t n_ctc = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    v.wer += wer[i];
    if (reachable[i]) {
      v.ctc += ctc[i];
      ++n_ctc;
    }
  }
  if (!items.empty()) v.wer /= static_cast<double>(items.size());
  v.ctc = n_ctc ? v.ctc / static_cast<double>(n_ctc) : std::numeric_limits<double>::infinity();
  return v;
}

}  // namespace

AsrValidation validate_asr(const asr::AsrModel& model, const std::vector<Utterance>& data) {
  return validate_items(model, asr_items(model.stats, data));
}

AsrTrainResult train_asr(const encoder::EncoderConfig& encoder_config,
                         const dsp::FeatureStats& stats, const std::vector<Utterance>& train,
                         const std::vector<Utterance>& val, const TrainConfig& cfg) {
  cfg.validate();
  encoder_config.validate();
  if (train.empty() || val.empty()) fail("train_asr: empty train or validation set");
  AsrTrainResult res;
  res.log.seed = cfg.seed;
  asr::AsrModel model;
  model.config = encoder_config;
  model.stats = stats;
  asr::init_asr_model(model, cfg.seed);

  std::vector<AsrItem> train_items = asr_items(stats, train);
  const std::vector<AsrItem> val_items = asr_items(stats, val);
  std::vector<AsrItem> kept;
  for (const AsrItem& it : train_items) {
    if (ctc_reachable(it)) {
      kept.push_back(it);
    } else {
      log::warning("train_asr: skipping " + it.utt->row.id + " (too short for its transcript)");
    }
  }
  if (kept.empty()) fail("train_asr: no trainable utterances");
  // plan_batches only needs the utterance list for its size and frame counts.
  std::vector<Utterance> shadow;
  shadow.reserve(kept.size());
  for (const AsrItem& it : kept) shadow.push_back(*it.utt);

  Adam adam({0.9, 0.98, 1e-8, cfg.weight_decay});
  asr::AsrModel best = model;
  best.params = round_to_float(model.params);
  res.best_val_wer = std::numeric_limits<double>::infinity();

  std::size_t step = 0;
  bool stop = false;
  auto evaluate = [&] {
    asr::AsrModel snap = model;
    snap.params = round_to_float(model.params);
    const AsrValidation v = validate_items(snap, val_items);
    res.curve.push_back({step, v.ctc, v.wer});
    res.log.add(step, "val", "ctc", v.ctc);
    res.log.add(step, "val", "wer", v.wer);
    if (v.wer < res.best_val_wer) {
      res.best_val_wer = v.wer;
      res.best_step = step;
      best = std::move(snap);
    }
    if (cfg.stop_at_val_wer >= 0.0 && v.wer <= cfg.stop_at_val_wer) stop = true;
  };
  evaluate();

  for (std::size_t epoch = 0; epoch < cfg.epochs && !stop; ++epoch) {
    const auto batches = epoch_batches(shadow, cfg, epoch);
    double epoch_loss = 0.0;
    for (std::size_t bi = 0; bi < batches.size() && !stop; ++bi) {
      Graph g;
      Var total;
      for (std::size_t i : batches[bi]) {
        const AsrItem& it = kept[i];
        asr::AsrGraph a = asr::build_asr(g, model, g.constant(it.x), it.x.rows());
        Var l = asr::ctc_loss_node(g, a.log_probs, it.utt->tokens);
        total = total.valid() ? g.add(total, l) : l;
      }
      Var loss = g.scale(total, 1.0 / static_cast<double>(batches[bi].size()));
      g.forward();
      const double lr = learning_rate(cfg, ++step);
      adam.step(model.params, g.backward(loss), lr);
      const double value = g.value(loss).data()[0];
      epoch_loss += value;
      res.log.add(step, "train", "ctc", value);
      res.log.add(step, "train", "lr", lr);
      if (is_eval_step(cfg, step, bi + 1 == batches.size())) evaluate();
    }
    char msg[160];
    std::snprintf(msg, sizeof msg, "asr epoch %zu/%zu: train ctc %.4f, val ctc %.4f, val wer %.4f",
                  epoch + 1, cfg.epochs, epoch_loss / static_cast<double>(batches.size()),
                  res.curve.back().val_ctc, res.curve.back().val_wer);
    log::info(msg);
  }
  if (res.curve.back().step != step) evaluate();
  res.steps = step;
  res.model = std::move(best);
  return res;
}

std::vector<Utterance> apply_frontend(const frontend::CleancoderModel& model,
                                      const std::vector<Utterance>& data) {
  std::vector<Utterance> out = data;
  parallel_for(out.size(), [&](std::size_t i) {
    out[i].input = frontend::cleancoder_forward(model, data[i].input);
  });
  return out;
}

}  // namespace cleancoder::trainer
