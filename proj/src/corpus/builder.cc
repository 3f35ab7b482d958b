// src/corpus/builder.cc

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

#include "cleancoder/corpus/builder.h"

#include <cstdio>

#include "cleancoder/error.h"
#include "cleancoder/log.h"
#include "cleancoder/numgrad/rng.h"
#include "cleancoder/parallel.h"

namespace cleancoder::corpus {
namespace fs = std::filesystem;

void CorpusConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("corpus: ") + what);
  };
  need(train >= 1 && val >= 1 && test >= 1, "split counts must be >= 1");
  need(train_speakers >= 1 && val_speakers >= 1 && test_speakers >= 1,
       "speaker counts must be >= 1");
  need(min_words >= 1 && min_words <= max_words, "need 1 <= min_words <= max_words");
  need(!snr_grid.empty(), "snr_grid is empty");
  need(!noise_kinds.empty(), "noise_kinds is empty");
}

std::vector<RowPlan> plan_split(const CorpusConfig& cfg, std::size_t split) {
  cfg.validate();
  const std::size_t counts[3] = {cfg.train, cfg.val, cfg.test};
  const std::size_t speakers[3] = {cfg.train_speakers, cfg.val_speakers, cfg.test_speakers};
  std::size_t speaker_base = 0;
  for (std::size_t s = 0; s < split; ++s) speaker_base += speakers[s];

  const std::size_t g = cfg.snr_grid.size();
  const std::size_t k = cfg.noise_kinds.size();
  std::vector<RowPlan> plans(counts[split]);
  for (std::size_t i = 0; i < plans.size(); ++i) {
    RowPlan& p = plans[i];
    const std::uint64_t tag = (static_cast<std::uint64_t>(split + 1) << 32) | i;
    numgrad::Rng rng(numgrad::derive_seed(cfg.seed, tag));
    const std::size_t n_words =
        cfg.min_words + rng.below(cfg.max_words - cfg.min_words + 1);
    std::string text;
    for (std::size_t w = 0; w < n_words; ++w) {
      if (w) text.push_back(' ');
      for (std::size_t s = 0; s < kSymbolsPerWord; ++s) {
        text.push_back(kAlphabet[rng.below(kAlphabet.size())]);
      }
    }
    const std::size_t speaker = speaker_base + i % speakers[split];
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%05zu", split_names()[split].c_str(), i);
    p.row.id = buf;
    std::snprintf(buf, sizeof buf, "spk%03zu", speaker);
    p.row.speaker = buf;
    p.row.text = text;
    p.row.snr_db = cfg.snr_grid[i % g];
    p.noise_kind = cfg.noise_kinds[(i / g) % k];
    p.row.noise_type = to_string(p.noise_kind);
    p.speaker_seed = numgrad::derive_seed(cfg.seed, 1000000 + speaker);
    p.noise_seed = numgrad::derive_seed(cfg.seed, tag | (1ULL << 40));
  }
  return plans;
}

RenderedRow render_row(const RowPlan& plan) {
  RenderedRow out;
  out.clean = dsp::quantize_pcm16(synth_utterance(plan.row.text, plan.speaker_seed));
  dsp::Waveform noise = gen_noise(plan.noise_kind, out.clean.size(), plan.noise_seed);
  Mixture mix = mix_at_snr(out.clean, noise, plan.row.snr_db);
  out.noisy = std::move(mix.noisy);
  out.clipped_samples = mix.clipped_samples;
  return out;
}

fs::path manifest_path(const fs::path& corpus_dir, const std::string& split) {
  return corpus_dir / "manifests" / (split + ".jsonl");
}

CorpusSummary build_corpus(const CorpusConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  std::error_code ec;
  for (const char* sub : {"wav_clean", "wav_noisy", "manifests"}) {
    fs::create_directories(out_dir / sub, ec);
    if (ec) fail("cannot create ", (out_dir / sub).string(), ": ", ec.message());
  }
  CorpusSummary summary;
  for (std::size_t split = 0; split < 3; ++split) {
    std::vector<RowPlan> plans = plan_split(cfg, split);
    std::vector<std::size_t> clipped(plans.size(), 0);
    parallel_for(plans.size(), [&](std::size_t i) {
      RowPlan& p = plans[i];
      RenderedRow r = render_row(p);
      p.row.clean_path = fs::absolute(out_dir / "wav_clean" / (p.row.id + ".wav"));
      p.row.noisy_path = fs::absolute(out_dir / "wav_noisy" / (p.row.id + ".wav"));
      dsp::write_wav(p.row.clean_path, r.clean);
      dsp::write_wav(p.row.noisy_path, r.noisy);
      clipped[i] = r.clipped_samples;
    });
    std::vector<ManifestRow> rows;
    for (std::size_t i = 0; i < plans.size(); ++i) {
      rows.push_back(plans[i].row);
      if (clipped[i]) ++summary.clipped_rows;
    }
    write_manifest(manifest_path(out_dir, split_names()[split]), rows);
    summary.rows[split] = rows.size();
  }
  log::info("corpus written to " + out_dir.string());
  return summary;
}

}  // namespace cleancoder::corpus
