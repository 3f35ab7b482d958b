// src/dsp/resample.cc

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

#include <cmath>
#include <numbers>
#include <numeric>

#include "cleancoder/dsp/waveform.h"
#include "cleancoder/error.h"

namespace cleancoder::dsp {
namespace {

constexpr int kTapsPerPhase = 32;
constexpr double kKaiserBeta = 8.0;

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
}

double kaiser(double u) {
  if (std::abs(u) > 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - u * u)) /
         std::cyl_bessel_i(0.0, kKaiserBeta);
}

}  // namespace

Waveform resample(const Waveform& w, int target_hz) {
  if (target_hz <= 0) fail("resample: target rate must be positive, got ", target_hz);
  if (w.sample_rate_hz <= 0) fail("resample: source rate must be positive");
  if (target_hz == w.sample_rate_hz) return w;

  const long g = std::gcd(static_cast<long>(target_hz), static_cast<long>(w.sample_rate_hz));
  const long up = target_hz / g;
  const long down = w.sample_rate_hz / g;
  const double cutoff = std::min(1.0, static_cast<double>(up) / static_cast<double>(down));
  constexpr long half = kTapsPerPhase / 2;

  // One 32-tap kernel per fractional phase p/up. Tap j multiplies input
  // sample floor(t) - half + 1 + j, sitting at offset d = frac + half - 1 - j.
  std::vector<std::vector<double>> phases(static_cast<std::size_t>(up),
                                          std::vector<double>(kTapsPerPhase));
  for (long p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / static_cast<double>(up);
    auto& taps = phases[static_cast<std::size_t>(p)];
    double total = 0;
    for (long j = 0; j < kTapsPerPhase; ++j) {
      const double d = frac + static_cast<double>(half - 1 - j);
      taps[static_cast<std::size_t>(j)] =
          cutoff * sinc(cutoff * d) * kaiser(d / static_cast<double>(half));
      total += taps[static_cast<std::size_t>(j)];
    }
    for (double& t : taps) t /= total;  // unit DC gain per phase
  }

  const long n_in = static_cast<long>(w.samples.size());
  const long n_out = (2 * n_in * up + down) / (2 * down);
  Waveform out;
  out.sample_rate_hz = target_hz;
  out.samples.assign(static_cast<std::size_t>(n_out), 0.0);
  for (long n = 0; n < n_out; ++n) {
    const long num = n * down;
    const long base = num / up;
    const auto& taps = phases[static_cast<std::size_t>(num % up)];
    double acc = 0;
    for (long j = 0; j < kTapsPerPhase; ++j) {
      const long k = base - half + 1 + j;
      if (k < 0 || k >= n_in) continue;
      acc += taps[static_cast<std::size_t>(j)] * w.samples[static_cast<std::size_t>(k)];
    }
    out.samples[static_cast<std::size_t>(n)] = acc;
  }
  return out;
}

}  // namespace cleancoder::dsp
