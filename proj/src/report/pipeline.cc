// src/report/pipeline.cc

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

#include "cleancoder/report/pipeline.h"

#include <cstdio>

#include "cleancoder/asr/evaluate.h"
#include "cleancoder/error.h"
#include "cleancoder/log.h"
#include "cleancoder/parallel.h"
#include "cleancoder/report/svg.h"
#include "cleancoder/trainer/model_io.h"

namespace cleancoder::report {
namespace {

using corpus::InputSource;
using corpus::Utterance;

std::vector<corpus::ManifestRow> rows_of(const fs::path& corpus_dir, const std::string& split) {
  return corpus::read_manifest(require_manifest(corpus_dir, split));
}

// Noisy inputs with clean targets.
std::vector<Utterance> paired(const fs::path& corpus_dir, const std::string& split) {
  return corpus::load_utterances(rows_of(corpus_dir, split), InputSource::kNoisy, true);
}

std::vector<Utterance> clean_inputs(std::vector<Utterance> data) {
  for (Utterance& u : data) u.input = u.target;
  return data;
}

void write_config(const ExperimentConfig& cfg, const fs::path& out_dir) {
  write_text(out_dir / kConfigJson, config_to_json(cfg).dump(2) + "\n");
}

void finish_asr_stage(const trainer::AsrTrainResult& r, const fs::path& out_dir) {
  trainer::save_asr(out_dir / kAsrCheckpoint, r.model);
  r.log.write(out_dir / kMetricsCsv);
  trainer::write_curves(out_dir / kCurvesCsv, r.curve);
}

std::string snr_label(double snr) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g dB", snr);
  return buf;
}

BarChart chart_from_report(const std::vector<SnrReportRow>& report, const std::string& title,
                           const std::string& y_label) {
  BarChart c;
  c.title = title;
  c.y_label = y_label;
  std::vector<double> snrs;
  for (const SnrReportRow& r : report) {
    if (snrs.empty() || snrs.back() != r.snr_db) snrs.push_back(r.snr_db);
    bool known = false;
    for (const BarSeries& s : c.series) known = known || s.label == r.condition;
    if (!known) c.series.push_back({r.condition, {}});
  }
  for (double snr : snrs) c.groups.push_back(snr_label(snr));
  for (BarSeries& s : c.series) {
    for (double snr : snrs) {
      double v = 0.0;
      for (const SnrReportRow& r : report) {
        if (r.snr_db == snr && r.condition == s.label) v = r.mean;
      }
      s.values.push_back(v);
    }
  }
  return c;
}

}  // namespace

fs::path require_manifest(const fs::path& corpus_dir, const std::string& split) {
  fs::path p = corpus::manifest_path(corpus_dir, split);
  if (!fs::exists(p)) {
    fail("missing corpus manifest ", p.string(), "; run gen-corpus first");
  }
  return p;
}

void require_artifact(const fs::path& path, const std::string& stage) {
  if (!fs::exists(path)) fail("missing ", path.string(), "; run ", stage, " first");
}

corpus::CorpusSummary run_gen_corpus(const ExperimentConfig& cfg, const fs::path& out_dir) {
  return corpus::build_corpus(cfg.corpus, out_dir);
}

StageResult run_pretrain(const ExperimentConfig& cfg, const fs::path& corpus_dir,
                         const fs::path& out_dir) {
  const std::vector<Utterance> train = paired(corpus_dir, "train");
  const std::vector<Utterance> val =
      corpus::load_utterances(rows_of(corpus_dir, "val"), InputSource::kClean, false);
  fs::create_directories(out_dir);
  write_config(cfg, out_dir);
  const dsp::FeatureStats stats = trainer::corpus_stats(train);
  trainer::AsrTrainResult r =
      trainer::train_asr(cfg.encoder, stats, clean_inputs(train), val, cfg.pretrain);
  if (cfg.pretrain.stop_at_val_wer >= 0 && r.best_val_wer > cfg.pretrain.stop_at_val_wer) {
    log::warning("pretrain: best val WER " + std::to_string(r.best_val_wer) +
                 " is above the target " + std::to_string(cfg.pretrain.stop_at_val_wer));
  }
  finish_asr_stage(r, out_dir);
  return {r.best_val_wer, r.curve.front().val_wer, r.steps, r.best_step};
}

StageResult run_train_frontend(const ExperimentConfig& cfg, const fs::path& corpus_dir,
                               const fs::path& backbone_ckpt, const fs::path& out_dir) {
  require_artifact(backbone_ckpt, "pretrain");
  const asr::AsrModel backbone = trainer::load_asr(backbone_ckpt);
  const std::vector<Utterance> train = paired(corpus_dir, "train");
  const std::vector<Utterance> val = paired(corpus_dir, "val");
  fs::create_directories(out_dir);
  write_config(cfg, out_dir);
  trainer::FrontendTrainResult r = trainer::train_frontend(
      trainer::frontend_from_asr(backbone, cfg.seed), train, val, cfg.frontend);
  trainer::save_frontend(out_dir / kFrontendCheckpoint, r.model);
  r.log.write(out_dir / kMetricsCsv);
  return {r.best_val_l1, r.init_val_l1, r.steps, r.best_step};
}

StageResult run_train_asr(const ExperimentConfig& cfg, const fs::path& corpus_dir,
                          const std::optional<fs::path>& frontend_ckpt, const fs::path& out_dir) {
  std::optional<frontend::CleancoderModel> fe;
  if (frontend_ckpt) {
    require_artifact(*frontend_ckpt, "train-frontend");
    fe = trainer::load_frontend(*frontend_ckpt);
  }
  std::vector<Utterance> train = paired(corpus_dir, "train");
  std::vector<Utterance> val =
      corpus::load_utterances(rows_of(corpus_dir, "val"), InputSource::kNoisy, false);
  const dsp::FeatureStats stats = trainer::corpus_stats(train);
  if (fe) {
    train = trainer::apply_frontend(*fe, train);
    val = trainer::apply_frontend(*fe, val);
  }
  fs::create_directories(out_dir);
  write_config(cfg, out_dir);
  trainer::AsrTrainResult r = trainer::train_asr(cfg.encoder, stats, train, val, cfg.scratch);
  finish_asr_stage(r, out_dir);
  return {r.best_val_wer, r.curve.front().val_wer, r.steps, r.best_step};
}

EvalOutputs run_eval_mae(const fs::path& frontend_ckpt, const fs::path& manifest,
                         const fs::path& out_dir, std::uint64_t seed) {
  require_artifact(frontend_ckpt, "train-frontend");
  const frontend::CleancoderModel fe = trainer::load_frontend(frontend_ckpt);
  const std::vector<corpus::ManifestRow> rows = corpus::read_manifest(manifest);
  for (const corpus::ManifestRow& r : rows) {
    if (r.clean_path.empty()) fail("eval-mae: manifest row ", r.id, " has no clean_path");
  }
  std::vector<double> noisy(rows.size()), denoised(rows.size());
  std::vector<std::string> errors(rows.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    try {
      const dsp::MelSpectrogram n = corpus::load_features(rows[i].noisy_path);
      const dsp::MelSpectrogram c = corpus::load_features(rows[i].clean_path);
      if (n.frames() != c.frames()) fail("noisy and clean lengths differ");
      noisy[i] = dsp::spec_mae(n, c);
      denoised[i] = dsp::spec_mae(frontend::cleancoder_forward(fe, n), c);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      if (errors[i].empty()) errors[i] = "unknown error";
    }
  });
  EvalOutputs out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!errors[i].empty()) {
      log::warning("row " + rows[i].id + " failed: " + errors[i]);
      ++out.failed_rows;
      continue;
    }
    const corpus::ManifestRow& r = rows[i];
    out.rows.push_back({r.id, r.snr_db, r.noise_type, "noisy", noisy[i]});
    out.rows.push_back({r.id, r.snr_db, r.noise_type, "denoised", denoised[i]});
  }
  out.report = snr_report(out.rows, "mae", seed);
  fs::create_directories(out_dir);
  write_row_values(out_dir / "mae_rows.csv", "mae", out.rows);
  write_snr_report(out_dir / "mae_report.csv", out.report);
  write_text(out_dir / "mae.svg",
             render_bar_chart(chart_from_report(out.report, "MAE vs clean by SNR", "MAE")));
  return out;
}

EvalOutputs run_eval_wer(const fs::path& asr_ckpt, const std::optional<fs::path>& frontend_ckpt,
                         const fs::path& manifest, const fs::path& out_dir, std::uint64_t seed,
                         InputSource source) {
  require_artifact(asr_ckpt, "pretrain or train-asr");
  const asr::AsrModel model = trainer::load_asr(asr_ckpt);
  std::optional<frontend::CleancoderModel> fe;
  if (frontend_ckpt) {
    require_artifact(*frontend_ckpt, "train-frontend");
    fe = trainer::load_frontend(*frontend_ckpt);
  }
  const std::vector<corpus::ManifestRow> rows = corpus::read_manifest(manifest);
  std::vector<asr::RowResult> all;
  EvalOutputs out;
  auto run = [&](const std::string& condition, const frontend::CleancoderModel* f) {
    asr::EvalOptions opt;
    opt.source = source;
    opt.frontend = f;
    opt.condition = condition;
    asr::EvalRun r = asr::evaluate_model(model, rows, opt);
    out.failed_rows += r.errors.size();
    all.insert(all.end(), r.rows.begin(), r.rows.end());
  };
  run(source == InputSource::kClean ? "clean" : "noisy-baseline", nullptr);
  if (fe) run("frontend-denoised", &*fe);
  for (const asr::RowResult& r : all) {
    out.rows.push_back({r.id, r.snr_db, r.noise_type, r.condition, r.wer});
  }
  out.report = snr_report(out.rows, "wer", seed);
  fs::create_directories(out_dir);
  asr::write_wer_rows(out_dir / "wer_rows.csv", all);
  write_snr_report(out_dir / "wer_report.csv", out.report);
  write_text(out_dir / "wer.svg",
             render_bar_chart(chart_from_report(out.report, "WER by SNR", "WER")));
  return out;
}

void run_plot_curves(const std::vector<fs::path>& logs, const std::vector<std::string>& labels,
                     const fs::path& out_svg) {
  if (logs.empty()) fail("plot-curves: no logs given");
  if (!labels.empty() && labels.size() != logs.size()) {
    fail("plot-curves: ", labels.size(), " labels for ", logs.size(), " logs");
  }
  LinePanel ctc{"Validation CTC loss", "step", "val_ctc", {}};
  LinePanel wer{"Validation WER", "step", "val_wer", {}};
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const std::vector<trainer::CurvePoint> curve = trainer::read_curves(logs[i]);
    const std::string label = labels.empty() ? logs[i].parent_path().filename().string() +
                                                   "/" + logs[i].filename().string()
                                             : labels[i];
    LineSeries a{label, {}, {}}, b{label, {}, {}};
    for (const trainer::CurvePoint& p : curve) {
      a.x.push_back(static_cast<double>(p.step));
      a.y.push_back(p.val_ctc);
      b.x.push_back(static_cast<double>(p.step));
      b.y.push_back(p.val_wer);
    }
    ctc.series.push_back(std::move(a));
    wer.series.push_back(std::move(b));
  }
  write_text(out_svg, render_line_chart({ctc, wer}));
}

}  // namespace cleancoder::report
