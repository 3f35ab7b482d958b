// src/corpus/batching.cc

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

#include "cleancoder/corpus/batching.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cleancoder/corpus/synth.h"
#include "cleancoder/dsp/waveform.h"
#include "cleancoder/error.h"
#include "cleancoder/log.h"
#include "cleancoder/numgrad/rng.h"
#include "cleancoder/parallel.h"

namespace cleancoder::corpus {

using numgrad::Tensor;

dsp::MelSpectrogram load_features(const std::filesystem::path& wav) {
  dsp::Waveform w = dsp::load_wav(wav);
  if (w.sample_rate_hz != dsp::kWorkingRateHz) w = dsp::resample(w, dsp::kWorkingRateHz);
  return dsp::log_mel(w);
}

std::vector<Utterance> load_utterances(const std::vector<ManifestRow>& rows, InputSource source,
                                       bool with_target) {
  std::vector<Utterance> out(rows.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const ManifestRow& r = rows[i];
    Utterance& u = out[i];
    u.row = r;
    u.tokens = tokenize(r.text);
    if (source == InputSource::kClean && r.clean_path.empty()) {
      fail("row ", r.id, " has no clean_path");
    }
    u.input = load_features(source == InputSource::kNoisy ? r.noisy_path : r.clean_path);
    if (with_target) {
      if (r.clean_path.empty()) fail("row ", r.id, " has no clean_path");
      u.target = source == InputSource::kClean ? u.input : load_features(r.clean_path);
      if (u.target.frames() != u.input.frames()) {
        fail("row ", r.id, ": noisy/clean frame counts differ (", u.input.frames(), " vs ",
             u.target.frames(), ")");
      }
    }
  });
  return out;
}

namespace {

Tensor item_rows(const Tensor& t, std::size_t n, std::size_t len) {
  const std::size_t stride = t.dim(1) * dsp::kMelBins;
  std::vector<double> v(t.data() + n * stride, t.data() + n * stride + len * dsp::kMelBins);
  return Tensor({len, dsp::kMelBins}, std::move(v));
}

void write_padded(Tensor& dst, std::size_t n, const dsp::MelSpectrogram& spec,
                  const dsp::FeatureStats& stats) {
  const std::size_t tmax = dst.dim(1);
  double* base = dst.data() + n * tmax * dsp::kMelBins;
  for (std::size_t t = 0; t < tmax; ++t) {
    for (std::size_t f = 0; f < dsp::kMelBins; ++f) {
      const double raw = t < spec.frames() ? spec.at(t, f) : dsp::log_floor();
      base[t * dsp::kMelBins + f] =
          (raw - stats.mean[f]) / std::max(stats.stddev[f], dsp::kStdFloor);
    }
  }
}

}  // namespace

Tensor Batch::input(std::size_t n) const { return item_rows(specs, n, lengths.at(n)); }

Tensor Batch::target(std::size_t n) const {
  if (targets.empty()) fail("batch has no targets");
  return item_rows(targets, n, lengths.at(n));
}

std::vector<std::vector<std::size_t>> plan_batches(const std::vector<Utterance>& data,
                                                   const BatchOptions& options) {
  if (options.batch_size < 1) fail("batch_size must be >= 1");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  if (options.shuffle) {
    numgrad::Rng rng(options.shuffle_seed);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
  }
  std::vector<std::vector<std::size_t>> batches;
  std::vector<std::size_t> current;
  for (std::size_t idx : order) {
    if (options.max_frames && data[idx].input.frames() > options.max_frames) {
      log::warning("skipping " + data[idx].row.id + ": " +
                   std::to_string(data[idx].input.frames()) + " frames exceeds cap " +
                   std::to_string(options.max_frames));
      continue;
    }
    current.push_back(idx);
    if (current.size() == options.batch_size) {
      batches.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) batches.push_back(std::move(current));
  return batches;
}

Batch assemble_batch(const std::vector<Utterance>& data, const std::vector<std::size_t>& items,
                     const dsp::FeatureStats& stats, bool with_targets) {
  if (items.empty()) fail("assemble_batch: no items");
  if (stats.mean.size() != dsp::kMelBins || stats.stddev.size() != dsp::kMelBins) {
    fail("feature stats have ", stats.mean.size(), " bins, expected ", dsp::kMelBins);
  }
  Batch b;
  b.items = items;
  std::size_t tmax = 0;
  for (std::size_t idx : items) tmax = std::max(tmax, data.at(idx).input.frames());
  const std::size_t n = items.size();
  b.specs = Tensor({n, tmax, dsp::kMelBins});
  b.pad_mask = Tensor({n, tmax});
  if (with_targets) b.targets = Tensor({n, tmax, dsp::kMelBins});
  for (std::size_t i = 0; i < n; ++i) {
    const Utterance& u = data[items[i]];
    write_padded(b.specs, i, u.input, stats);
    if (with_targets) {
      if (u.target.frames() != u.input.frames()) fail("row ", u.row.id, " has no clean target");
      write_padded(b.targets, i, u.target, stats);
    }
    for (std::size_t t = 0; t < u.input.frames(); ++t) b.pad_mask.at(i, t) = 1.0;
    b.lengths.push_back(u.input.frames());
    b.texts.push_back(u.tokens);
  }
  return b;
}

std::vector<Batch> make_batches(const std::vector<Utterance>& data,
                                const dsp::FeatureStats& stats, const BatchOptions& options) {
  std::vector<Batch> out;
  for (const auto& items : plan_batches(data, options)) {
    out.push_back(assemble_batch(data, items, stats, options.with_targets));
  }
  return out;
}

double masked_mae(const Tensor& pred, const Tensor& target, const Tensor& pad_mask) {
  if (pred.shape() != target.shape()) {
    fail("masked_mae: shape ", numgrad::shape_string(pred.shape()), " vs ",
         numgrad::shape_string(target.shape()));
  }
  const std::size_t frames = pad_mask.size();
  if (frames == 0 || pred.size() % frames != 0) fail("masked_mae: mask does not match");
  const std::size_t width = pred.size() / frames;
  double sum = 0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < frames; ++r) {
    if (pad_mask[r] == 0.0) continue;
    for (std::size_t c = 0; c < width; ++c) {
      sum += std::abs(pred[r * width + c] - target[r * width + c]);
    }
    count += width;
  }
  if (count == 0) fail("masked_mae: empty mask");
  return sum / static_cast<double>(count);
}

}  // namespace cleancoder::corpus
