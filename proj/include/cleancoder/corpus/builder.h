// include/cleancoder/corpus/builder.h

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

#ifndef CLEANCODER_CORPUS_BUILDER_H_
#define CLEANCODER_CORPUS_BUILDER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cleancoder/corpus/manifest.h"
#include "cleancoder/corpus/synth.h"

namespace cleancoder::corpus {

struct CorpusConfig {
  std::size_t train = 800;
  std::size_t val = 100;
  std::size_t test = 100;
  std::size_t train_speakers = 40;
  std::size_t val_speakers = 10;
  std::size_t test_speakers = 10;
  std::size_t min_words = 2;
  std::size_t max_words = 3;
  std::vector<double> snr_grid{2.5, 7.5, 12.5, 17.5};
  std::vector<NoiseKind> noise_kinds{NoiseKind::kWhite, NoiseKind::kBabble};
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
};

inline const std::vector<std::string>& split_names() {
  static const std::vector<std::string> names{"train", "val", "test"};
  return names;
}

// Fully determined row description (no audio yet).
struct RowPlan {
  ManifestRow row;
  std::uint64_t speaker_seed = 0;
  std::uint64_t noise_seed = 0;
  NoiseKind noise_kind = NoiseKind::kWhite;
};

// Rows of one split in manifest order. Row i of a split gets SNR
// grid[i % G] and noise kind kinds[(i / G) % K], so every split cycles the
// full grid x kinds product.
std::vector<RowPlan> plan_split(const CorpusConfig& cfg, std::size_t split);

struct RenderedRow {
  dsp::Waveform clean;  // PCM16-exact
  dsp::Waveform noisy;
  std::size_t clipped_samples = 0;
};
RenderedRow render_row(const RowPlan& plan);

struct CorpusSummary {
  std::size_t rows[3] = {0, 0, 0};
  std::size_t clipped_rows = 0;
};

// Writes out_dir/{wav_clean,wav_noisy,manifests/{train,val,test}.jsonl}.
CorpusSummary build_corpus(const CorpusConfig& cfg, const std::filesystem::path& out_dir);

std::filesystem::path manifest_path(const std::filesystem::path& corpus_dir,
                                    const std::string& split);

}  // namespace cleancoder::corpus

#endif  // CLEANCODER_CORPUS_BUILDER_H_
