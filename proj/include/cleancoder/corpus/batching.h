// include/cleancoder/corpus/batching.h

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

#ifndef CLEANCODER_CORPUS_BATCHING_H_
#define CLEANCODER_CORPUS_BATCHING_H_

#include <cstdint>
#include <vector>

#include "cleancoder/corpus/manifest.h"
#include "cleancoder/dsp/mel.h"
#include "cleancoder/numgrad/tensor.h"

namespace cleancoder::corpus {

enum class InputSource { kNoisy, kClean };

// Log-Mel features for one manifest row, in the raw (unnormalized) domain.
struct Utterance {
  ManifestRow row;
  dsp::MelSpectrogram input;
  dsp::MelSpectrogram target;  // clean features; zero frames when not loaded
  std::vector<int> tokens;
};

// Reads, resamples to 16 kHz when needed, and computes log-Mel features.
dsp::MelSpectrogram load_features(const std::filesystem::path& wav);

// Loads every row in parallel. With `with_target`, clean_path must be set
// and the clean features must have the same frame count as the input.
std::vector<Utterance> load_utterances(const std::vector<ManifestRow>& rows, InputSource source,
                                       bool with_target);

struct Batch {
  std::vector<std::size_t> items;  // indices into the utterance list
  numgrad::Tensor specs;           // N x T_max x 80, normalized, padded
  numgrad::Tensor targets;         // same shape as specs, or empty
  std::vector<std::size_t> lengths;
  std::vector<std::vector<int>> texts;
  numgrad::Tensor pad_mask;  // N x T_max, 1 for real frames

  std::size_t size() const { return items.size(); }
  std::size_t max_frames() const { return specs.empty() ? 0 : specs.dim(1); }
  // Real frames of item n as a (lengths[n], 80) matrix.
  numgrad::Tensor input(std::size_t n) const;
  numgrad::Tensor target(std::size_t n) const;
};

struct BatchOptions {
  std::size_t batch_size = 16;
  bool shuffle = true;
  std::uint64_t shuffle_seed = 0;
  std::size_t max_frames = 0;  // 0: no cap
  bool with_targets = false;
};

// Item order for one epoch: Fisher-Yates under shuffle_seed, then chunks of
// batch_size. Items above max_frames are skipped with a warning.
std::vector<std::vector<std::size_t>> plan_batches(const std::vector<Utterance>& data,
                                                   const BatchOptions& options);

// Padding uses the log floor before normalization.
Batch assemble_batch(const std::vector<Utterance>& data, const std::vector<std::size_t>& items,
                     const dsp::FeatureStats& stats, bool with_targets);

std::vector<Batch> make_batches(const std::vector<Utterance>& data,
                                const dsp::FeatureStats& stats, const BatchOptions& options);

// Mean |pred - target| over cells whose frame is unmasked.
double masked_mae(const numgrad::Tensor& pred, const numgrad::Tensor& target,
                  const numgrad::Tensor& pad_mask);

}  // namespace cleancoder::corpus

#endif  // CLEANCODER_CORPUS_BATCHING_H_
