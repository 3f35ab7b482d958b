// src/dsp/mel.cc

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

#include "cleancoder/dsp/mel.h"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "cleancoder/error.h"

namespace cleancoder::dsp {
namespace {

constexpr double kMinLogHz = 1000.0;
constexpr double kLinearStep = 200.0 / 3.0;
constexpr double kMinLogMel = kMinLogHz / kLinearStep;
const double kLogStep = std::log(6.4) / 27.0;

// FFTW planning is not thread-safe; execution with a shared plan on distinct
// aligned buffers is.
class RealFft {
 public:
  RealFft() {
    double* in = fftw_alloc_real(kFftSize);
    fftw_complex* out = fftw_alloc_complex(kSpectrumBins);
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(kFftSize), in, out, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    if (plan_ == nullptr) fail("fftw planning failed");
  }
  ~RealFft() { fftw_destroy_plan(plan_); }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  void execute(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(plan_, in, out); }

  static const RealFft& instance() {
    static RealFft fft;
    return fft;
  }

 private:
  fftw_plan plan_ = nullptr;
};

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

const std::vector<double>& hann_window() {
  static const std::vector<double> w = [] {
    std::vector<double> v(kWindowSamples);
    for (std::size_t n = 0; n < kWindowSamples; ++n) {
      v[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                  static_cast<double>(kWindowSamples));
    }
    return v;
  }();
  return w;
}

}  // namespace

double log_floor() { return std::log(kLogFloorEnergy); }

MelSpectrogram::MelSpectrogram(std::size_t frames, double fill)
    : frames_(frames), values_(frames * kMelBins, fill) {}

MelSpectrogram::MelSpectrogram(std::size_t frames, std::vector<double> values)
    : frames_(frames), values_(std::move(values)) {
  if (values_.size() != frames_ * kMelBins) {
    fail("mel spectrogram with ", frames_, " frames needs ", frames_ * kMelBins,
         " values, got ", values_.size());
  }
}

numgrad::Tensor MelSpectrogram::to_tensor() const {
  return numgrad::Tensor({frames_, kMelBins}, values_);
}

MelSpectrogram MelSpectrogram::from_tensor(const numgrad::Tensor& t) {
  if (t.cols() != kMelBins) fail("expected ", kMelBins, " mel bins, got ", t.cols());
  return MelSpectrogram(t.rows(), t.storage());
}

double hz_to_mel_slaney(double hz) {
  if (hz < kMinLogHz) return hz / kLinearStep;
  return kMinLogMel + std::log(hz / kMinLogHz) / kLogStep;
}

double mel_to_hz_slaney(double mel) {
  if (mel < kMinLogMel) return mel * kLinearStep;
  return kMinLogHz * std::exp(kLogStep * (mel - kMinLogMel));
}

const std::vector<MelFilter>& mel_filterbank() {
  static const std::vector<MelFilter> bank = [] {
    const double fmax = kWorkingRateHz / 2.0;
    const double mel_lo = hz_to_mel_slaney(0.0);
    const double mel_hi = hz_to_mel_slaney(fmax);
    std::vector<double> edges(kMelBins + 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const double m = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    static_cast<double>(kMelBins + 1);
      edges[i] = mel_to_hz_slaney(m);
    }
    std::vector<MelFilter> filters(kMelBins);
    for (std::size_t m = 0; m < kMelBins; ++m) {
      const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
      const double area_norm = 2.0 / (hi - lo);
      MelFilter& f = filters[m];
      f.center_hz = center;
      bool started = false;
      for (std::size_t k = 0; k < kSpectrumBins; ++k) {
        const double hz = static_cast<double>(k) * kWorkingRateHz / static_cast<double>(kFftSize);
        const double rise = (hz - lo) / (center - lo);
        const double fall = (hi - hz) / (hi - center);
        const double w = std::max(0.0, std::min(rise, fall)) * area_norm;
        if (w > 0.0) {
          if (!started) {
            f.first_bin = k;
            started = true;
          }
          f.weights.resize(k - f.first_bin + 1, 0.0);
          f.weights.back() = w;
        }
      }
    }
    return filters;
  }();
  return bank;
}

std::size_t frame_count(std::size_t n_samples) {
  if (n_samples < kWindowSamples) fail("utterance shorter than one window");
  return (n_samples - kWindowSamples) / kHopSamples + 1;
}

MelSpectrogram log_mel(const Waveform& w) {
  if (w.sample_rate_hz != kWorkingRateHz) {
    fail("log_mel expects ", kWorkingRateHz, " Hz audio, got ", w.sample_rate_hz);
  }
  const std::size_t frames = frame_count(w.samples.size());
  const auto& window = hann_window();
  const auto& bank = mel_filterbank();
  const RealFft& fft = RealFft::instance();

  std::unique_ptr<double, FftwDeleter> in(fftw_alloc_real(kFftSize));
  std::unique_ptr<fftw_complex, FftwDeleter> out(fftw_alloc_complex(kSpectrumBins));
  std::vector<double> power(kSpectrumBins);
  const double floor_log = log_floor();

  MelSpectrogram spec(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* src = w.samples.data() + t * kHopSamples;
    double* buf = in.get();
    for (std::size_t n = 0; n < kWindowSamples; ++n) buf[n] = src[n] * window[n];
    for (std::size_t n = kWindowSamples; n < kFftSize; ++n) buf[n] = 0.0;
    fft.execute(buf, out.get());
    for (std::size_t k = 0; k < kSpectrumBins; ++k) {
      const double re = out.get()[k][0], im = out.get()[k][1];
      power[k] = re * re + im * im;
    }
    auto row = spec.frame(t);
    for (std::size_t m = 0; m < kMelBins; ++m) {
      const MelFilter& f = bank[m];
      double e = 0;
      for (std::size_t j = 0; j < f.weights.size(); ++j) e += f.weights[j] * power[f.first_bin + j];
      row[m] = e > kLogFloorEnergy ? std::log(e) : floor_log;
    }
  }
  return spec;
}

double spec_mae(const MelSpectrogram& a, const MelSpectrogram& b) {
  if (a.frames() != b.frames()) {
    fail("spec_mae shape mismatch: ", a.frames(), "x80 vs ", b.frames(), "x80");
  }
  if (a.frames() == 0) fail("spec_mae on empty spectrogram");
  double s = 0;
  for (std::size_t i = 0; i < a.values().size(); ++i) s += std::abs(a.values()[i] - b.values()[i]);
  return s / static_cast<double>(a.values().size());
}

FeatureStats compute_stats(std::span<const MelSpectrogram> specs) {
  FeatureStats st;
  st.mean.assign(kMelBins, 0.0);
  st.stddev.assign(kMelBins, 0.0);
  std::size_t n = 0;
  for (const auto& s : specs) {
    for (std::size_t t = 0; t < s.frames(); ++t) {
      for (std::size_t f = 0; f < kMelBins; ++f) st.mean[f] += s.at(t, f);
    }
    n += s.frames();
  }
  if (n == 0) fail("compute_stats: no frames");
  for (double& m : st.mean) m /= static_cast<double>(n);
  for (const auto& s : specs) {
    for (std::size_t t = 0; t < s.frames(); ++t) {
      for (std::size_t f = 0; f < kMelBins; ++f) {
        const double d = s.at(t, f) - st.mean[f];
        st.stddev[f] += d * d;
      }
    }
  }
  for (double& v : st.stddev) v = std::sqrt(v / static_cast<double>(n));
  return st;
}

namespace {
void check_stats(const FeatureStats& stats) {
  if (stats.mean.size() != kMelBins || stats.stddev.size() != kMelBins) {
    fail("feature stats must have ", kMelBins, " bins, got ", stats.mean.size(), "/",
         stats.stddev.size());
  }
}
}  // namespace

MelSpectrogram normalize(const MelSpectrogram& s, const FeatureStats& stats) {
  check_stats(stats);
  MelSpectrogram out(s.frames());
  for (std::size_t t = 0; t < s.frames(); ++t) {
    for (std::size_t f = 0; f < kMelBins; ++f) {
      out.at(t, f) = (s.at(t, f) - stats.mean[f]) / std::max(stats.stddev[f], kStdFloor);
    }
  }
  return out;
}

MelSpectrogram denormalize(const MelSpectrogram& s, const FeatureStats& stats) {
  check_stats(stats);
  MelSpectrogram out(s.frames());
  for (std::size_t t = 0; t < s.frames(); ++t) {
    for (std::size_t f = 0; f < kMelBins; ++f) {
      out.at(t, f) = s.at(t, f) * std::max(stats.stddev[f], kStdFloor) + stats.mean[f];
    }
  }
  return out;
}

}  // namespace cleancoder::dsp
