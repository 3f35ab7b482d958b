// include/cleancoder/dsp/mel.h

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

#ifndef CLEANCODER_DSP_MEL_H_
#define CLEANCODER_DSP_MEL_H_

#include <array>
#include <span>
#include <vector>

#include "cleancoder/dsp/waveform.h"
#include "cleancoder/numgrad/tensor.h"

namespace cleancoder::dsp {

inline constexpr std::size_t kMelBins = 80;
inline constexpr std::size_t kWindowSamples = 400;  // 25 ms at 16 kHz
inline constexpr std::size_t kHopSamples = 160;     // 10 ms at 16 kHz
inline constexpr std::size_t kFftSize = 512;
inline constexpr std::size_t kSpectrumBins = kFftSize / 2 + 1;
inline constexpr double kLogFloorEnergy = 1e-10;
double log_floor();  // ln(kLogFloorEnergy)

// T x 80 grid of log-Mel energies, row-major by frame.
class MelSpectrogram {
 public:
  MelSpectrogram() = default;
  explicit MelSpectrogram(std::size_t frames, double fill = 0.0);
  MelSpectrogram(std::size_t frames, std::vector<double> values);

  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return kMelBins; }
  double& at(std::size_t t, std::size_t f) { return values_[t * kMelBins + f]; }
  double at(std::size_t t, std::size_t f) const { return values_[t * kMelBins + f]; }
  std::span<double> frame(std::size_t t) { return {values_.data() + t * kMelBins, kMelBins}; }
  std::span<const double> frame(std::size_t t) const {
    return {values_.data() + t * kMelBins, kMelBins};
  }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  numgrad::Tensor to_tensor() const;
  static MelSpectrogram from_tensor(const numgrad::Tensor& t);

  friend bool operator==(const MelSpectrogram&, const MelSpectrogram&) = default;

 private:
  std::size_t frames_ = 0;
  std::vector<double> values_;
};

// One triangular filter, stored sparsely over FFT bins [first_bin, first_bin + weights.size()).
struct MelFilter {
  std::size_t first_bin = 0;
  std::vector<double> weights;
  double center_hz = 0.0;
};

double hz_to_mel_slaney(double hz);
double mel_to_hz_slaney(double mel);
// 80 area-normalized Slaney filters spanning 0..8000 Hz over a 512-point FFT.
const std::vector<MelFilter>& mel_filterbank();

// Frame count for n samples: floor((n - 400) / 160) + 1; requires n >= 400.
std::size_t frame_count(std::size_t n_samples);

// Log-Mel features: 400-sample periodic Hann frames every 160 samples (no
// padding), 512-point power spectrum, Slaney filterbank, ln(max(e, 1e-10)).
MelSpectrogram log_mel(const Waveform& w);

// Mean absolute difference over all cells.
double spec_mae(const MelSpectrogram& a, const MelSpectrogram& b);

// Per-bin mean and standard deviation.
struct FeatureStats {
  std::vector<double> mean;
  std::vector<double> stddev;
};

inline constexpr double kStdFloor = 1e-5;

FeatureStats compute_stats(std::span<const MelSpectrogram> specs);
MelSpectrogram normalize(const MelSpectrogram& s, const FeatureStats& stats);
MelSpectrogram denormalize(const MelSpectrogram& s, const FeatureStats& stats);

}  // namespace cleancoder::dsp

#endif  // CLEANCODER_DSP_MEL_H_
