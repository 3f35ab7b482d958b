// src/corpus/synth.cc

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

#include "cleancoder/corpus/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cleancoder/error.h"
#include "cleancoder/log.h"
#include "cleancoder/numgrad/rng.h"

namespace cleancoder::corpus {
namespace {

constexpr double kBaseHz = 110.0;
constexpr double kMaxSpeakerOffsetSemitones = 0.25;
constexpr double kHarmonicGain[3] = {1.0, 0.5, 1.0 / 3.0};

// Unnormalized rendering; synth_utterance and babble both start from it.
std::vector<double> render_symbols(const std::vector<int>& symbols, double pitch_factor) {
  std::vector<double> out(symbols.size() * kSymbolSamples);
  const double rate = dsp::kWorkingRateHz;
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    const double f0 = kBaseHz * std::pow(2.0, symbols[s] / 12.0) * pitch_factor;
    double* seg = out.data() + s * kSymbolSamples;
    for (std::size_t n = 0; n < kSymbolSamples; ++n) {
      const double env = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                              static_cast<double>(kSymbolSamples - 1));
      const double t = static_cast<double>(n) / rate;
      double v = 0;
      for (int h = 0; h < 3; ++h) {
        v += kHarmonicGain[h] * std::sin(2.0 * std::numbers::pi * (h + 1) * f0 * t);
      }
      seg[n] = env * v;
    }
  }
  return out;
}

void scale_to_rms(std::vector<double>& v, double target) {
  double ms = 0;
  for (double x : v) ms += x * x;
  ms /= static_cast<double>(v.size());
  if (ms <= 0.0) return;
  const double g = target / std::sqrt(ms);
  for (double& x : v) x *= g;
}

}  // namespace

int symbol_index(char c) {
  auto pos = kAlphabet.find(c);
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

std::vector<int> tokenize(std::string_view text) {
  std::vector<int> ids;
  for (char c : text) {
    if (c == ' ') continue;
    int k = symbol_index(c);
    if (k < 0) fail("unknown symbol '", std::string(1, c), "' in \"", std::string(text), "\"");
    ids.push_back(k + 1);
  }
  return ids;
}

std::string detokenize(const std::vector<int>& ids) {
  std::string s;
  for (int id : ids) {
    if (id < 1 || id > static_cast<int>(kAlphabet.size())) fail("token id ", id, " out of range");
    s.push_back(kAlphabet[static_cast<std::size_t>(id - 1)]);
  }
  return s;
}

std::vector<std::string> segment_words(std::string_view symbols) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < symbols.size(); i += kSymbolsPerWord) {
    words.emplace_back(symbols.substr(i, kSymbolsPerWord));
  }
  return words;
}

std::vector<std::string> split_words(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

double speaker_pitch_factor(std::uint64_t speaker_seed) {
  numgrad::Rng rng(speaker_seed);
  const double semitones = rng.uniform(-kMaxSpeakerOffsetSemitones, kMaxSpeakerOffsetSemitones);
  return std::pow(2.0, semitones / 12.0);
}

dsp::Waveform synth_utterance(std::string_view text, std::uint64_t speaker_seed) {
  std::vector<int> symbols;
  for (int id : tokenize(text)) symbols.push_back(id - 1);
  if (symbols.empty()) fail("synth_utterance: empty text");
  dsp::Waveform w;
  w.samples = render_symbols(symbols, speaker_pitch_factor(speaker_seed));
  double peak = 0;
  for (double v : w.samples) peak = std::max(peak, std::abs(v));
  for (double& v : w.samples) v *= kPeakLevel / peak;
  return w;
}

NoiseKind parse_noise_kind(std::string_view s) {
  if (s == "white") return NoiseKind::kWhite;
  if (s == "babble") return NoiseKind::kBabble;
  fail("unknown noise kind '", std::string(s), "' (expected white or babble)");
}

std::string to_string(NoiseKind k) { return k == NoiseKind::kWhite ? "white" : "babble"; }

dsp::Waveform gen_noise(NoiseKind kind, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) fail("gen_noise: need at least one sample");
  numgrad::Rng rng(seed);
  dsp::Waveform w;
  if (kind == NoiseKind::kWhite) {
    w.samples.resize(n_samples);
    for (double& v : w.samples) v = rng.uniform(-1.0, 1.0);
  } else {
    w.samples.assign(n_samples, 0.0);
    for (int s = 0; s < kBabbleStreams; ++s) {
      const double pitch = speaker_pitch_factor(rng.next());
      const std::size_t delay = rng.below(kSymbolSamples);
      const std::size_t count = (n_samples + delay) / kSymbolSamples + 1;
      std::vector<int> symbols(count);
      for (int& k : symbols) k = static_cast<int>(rng.below(kAlphabet.size()));
      std::vector<double> stream = render_symbols(symbols, pitch);
      for (std::size_t i = 0; i < n_samples; ++i) w.samples[i] += stream[i + delay];
    }
  }
  scale_to_rms(w.samples, kNoiseRms);
  return w;
}

Mixture mix_at_snr(const dsp::Waveform& clean, const dsp::Waveform& noise, double snr_db) {
  if (clean.sample_rate_hz != noise.sample_rate_hz) {
    fail("mix_at_snr: sample rates differ (", clean.sample_rate_hz, " vs ",
         noise.sample_rate_hz, ")");
  }
  if (clean.samples.empty() || noise.samples.empty()) fail("mix_at_snr: empty input");
  Mixture m;
  m.scaled_noise.sample_rate_hz = clean.sample_rate_hz;
  m.scaled_noise.samples.resize(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    m.scaled_noise.samples[i] = noise.samples[i % noise.size()];
  }
  const double pc = dsp::mean_square(clean);
  const double pn = dsp::mean_square(m.scaled_noise);
  if (pc == 0.0) fail("mix_at_snr: clean signal is silent");
  if (pn == 0.0) fail("mix_at_snr: noise signal is silent");
  m.noise_gain = std::sqrt(pc / (pn * std::pow(10.0, snr_db / 10.0)));
  for (double& v : m.scaled_noise.samples) v *= m.noise_gain;

  m.noisy.sample_rate_hz = clean.sample_rate_hz;
  m.noisy.samples.resize(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    double v = clean.samples[i] + m.scaled_noise.samples[i];
    if (v > 1.0 || v < -1.0) {
      ++m.clipped_samples;
      v = std::clamp(v, -1.0, 1.0);
    }
    m.noisy.samples[i] = v;
  }
  if (static_cast<double>(m.clipped_samples) > 0.001 * static_cast<double>(clean.size())) {
    log::warning("mix_at_snr: clipped " + std::to_string(m.clipped_samples) + " of " +
                 std::to_string(clean.size()) + " samples at " + std::to_string(snr_db) +
                 " dB");
  }
  return m;
}

}  // namespace cleancoder::corpus
