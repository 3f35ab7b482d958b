// tools/cleancoder.cc

// Copyright 2026 The Cleancoder Authors

// See ../COPYING for clarification regarding multiple authors
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

// Command-line driver: corpus generation, training stages, evaluation reports.

#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cleancoder/error.h"
#include "cleancoder/log.h"
#include "cleancoder/report/pipeline.h"

namespace {

using namespace cleancoder;
namespace fs = std::filesystem;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
};

report::ExperimentConfig resolve(const Common& c) {
  report::ExperimentConfig cfg =
      c.config.empty() ? report::ExperimentConfig{} : report::load_config(c.config);
  if (c.seed) cfg.set_seed(*c.seed);
  if (cfg.eval.threads > 0) ::setenv("CLEANCODER_THREADS", std::to_string(cfg.eval.threads).c_str(), 1);
  return cfg;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "experiment config JSON");
  cmd->add_option("--seed", c.seed, "override the config seed");
}

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

corpus::InputSource parse_source(const std::string& s) {
  if (s == "noisy") return corpus::InputSource::kNoisy;
  if (s == "clean") return corpus::InputSource::kClean;
  throw ConfigError("--input must be noisy or clean, got '" + s + "'");
}

void print_stage(const char* name, const report::StageResult& r, const char* metric) {
  std::printf("%s: steps=%zu best_step=%zu init_%s=%.6f best_%s=%.6f\n", name, r.steps,
              r.best_step, metric, r.init_val, metric, r.best_val);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cleancoder: denoising frontend on a frozen Conformer encoder"};
  app.require_subcommand(1);

  Common gen_c, pre_c, fe_c, asr_c, mae_c, wer_c;
  std::string gen_out, pre_corpus, pre_out, fe_corpus, fe_backbone, fe_out, asr_corpus, asr_out,
      asr_frontend, mae_frontend, mae_manifest, mae_out, wer_asr, wer_frontend, wer_manifest,
      wer_out, wer_input = "noisy", plot_out;
  std::vector<std::string> plot_logs, plot_labels;

  auto* gen = app.add_subcommand("gen-corpus", "synthesize the paired noisy/clean corpus");
  add_common(gen, gen_c);
  gen->add_option("--out", gen_out, "corpus directory")->required();

  auto* pre = app.add_subcommand("pretrain", "train the clean-speech ASR backbone");
  add_common(pre, pre_c);
  pre->add_option("--corpus", pre_corpus, "corpus directory")->required();
  pre->add_option("--out", pre_out, "output directory")->required();

  auto* fe = app.add_subcommand("train-frontend", "train the denoiser on a frozen encoder");
  add_common(fe, fe_c);
  fe->add_option("--corpus", fe_corpus, "corpus directory")->required();
  fe->add_option("--backbone", fe_backbone, "pretrained ASR checkpoint")->required();
  fe->add_option("--out", fe_out, "output directory")->required();

  auto* tasr = app.add_subcommand("train-asr", "train an ASR model from scratch on noisy audio");
  add_common(tasr, asr_c);
  tasr->add_option("--corpus", asr_corpus, "corpus directory")->required();
  tasr->add_option("--out", asr_out, "output directory")->required();
  tasr->add_option("--frontend", asr_frontend, "frozen frontend checkpoint (omit for baseline)");

  auto* mae = app.add_subcommand("eval-mae", "MAE of noisy and denoised features vs clean");
  add_common(mae, mae_c);
  mae->add_option("--frontend", mae_frontend, "frontend checkpoint")->required();
  mae->add_option("--manifest", mae_manifest, "manifest JSONL")->required();
  mae->add_option("--out", mae_out, "output directory")->required();

  auto* wer = app.add_subcommand("eval-wer", "WER grouped by SNR");
  add_common(wer, wer_c);
  wer->add_option("--asr", wer_asr, "ASR checkpoint")->required();
  wer->add_option("--frontend", wer_frontend, "frontend checkpoint");
  wer->add_option("--manifest", wer_manifest, "manifest JSONL")->required();
  wer->add_option("--out", wer_out, "output directory")->required();
  wer->add_option("--input", wer_input, "audio column: noisy | clean");

  auto* plot = app.add_subcommand("plot-curves", "line chart of validation curves");
  plot->add_option("--logs", plot_logs, "curves CSVs (step,val_ctc,val_wer)")->required();
  plot->add_option("--labels", plot_labels, "legend labels, one per log");
  plot->add_option("--out", plot_out, "output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      report::ExperimentConfig cfg = resolve(gen_c);
      corpus::CorpusSummary s = report::run_gen_corpus(cfg, gen_out);
      std::printf("train=%zu val=%zu test=%zu\n", s.rows[0], s.rows[1], s.rows[2]);
    } else if (*pre) {
      print_stage("pretrain", report::run_pretrain(resolve(pre_c), pre_corpus, pre_out), "wer");
    } else if (*fe) {
      print_stage("train-frontend",
                  report::run_train_frontend(resolve(fe_c), fe_corpus, fe_backbone, fe_out), "l1");
    } else if (*tasr) {
      print_stage("train-asr",
                  report::run_train_asr(resolve(asr_c), asr_corpus, optional_path(asr_frontend),
                                        asr_out),
                  "wer");
    } else if (*mae) {
      report::ExperimentConfig cfg = resolve(mae_c);
      report::EvalOutputs o = report::run_eval_mae(mae_frontend, mae_manifest, mae_out, cfg.seed);
      for (const auto& r : o.report) {
        std::printf("snr=%g condition=%s mae=%.6f n=%zu\n", r.snr_db, r.condition.c_str(), r.mean,
                    r.count);
      }
      if (o.failed_rows > 0) return kExitRuntime;
    } else if (*wer) {
      report::ExperimentConfig cfg = resolve(wer_c);
      report::EvalOutputs o =
          report::run_eval_wer(wer_asr, optional_path(wer_frontend), wer_manifest, wer_out,
                               cfg.seed, parse_source(wer_input));
      for (const auto& r : o.report) {
        std::printf("snr=%g condition=%s wer=%.6f n=%zu\n", r.snr_db, r.condition.c_str(), r.mean,
                    r.count);
      }
      if (o.failed_rows > 0) return kExitRuntime;
    } else if (*plot) {
      report::run_plot_curves({plot_logs.begin(), plot_logs.end()}, plot_labels, plot_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
