// tests/unit/dsp_test.cc

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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "cleancoder/dsp/mel.h"
#include "cleancoder/dsp/waveform.h"
#include "cleancoder/error.h"
#include "cleancoder/numgrad/rng.h"

using namespace cleancoder;
using namespace cleancoder::dsp;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "cleancoder_dsp_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

// Minimal hand-rolled RIFF writer so malformed headers can be produced.
void write_raw_wav(const std::filesystem::path& p, int format, int channels, int bits,
                   const std::vector<std::int16_t>& samples, std::size_t truncate_to = 0) {
  std::string b;
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  auto u16 = [&](std::uint16_t v) {
    b.push_back(static_cast<char>(v & 0xff));
    b.push_back(static_cast<char>(v >> 8));
  };
  const auto data = static_cast<std::uint32_t>(samples.size() * 2);
  b += "RIFF";
  u32(36 + data);
  b += "WAVEfmt ";
  u32(16);
  u16(static_cast<std::uint16_t>(format));
  u16(static_cast<std::uint16_t>(channels));
  u32(16000);
  u32(32000);
  u16(2);
  u16(static_cast<std::uint16_t>(bits));
  b += "data";
  u32(data);
  for (auto s : samples) u16(static_cast<std::uint16_t>(s));
  if (truncate_to) b.resize(truncate_to);
  std::ofstream(p, std::ios::binary).write(b.data(), static_cast<std::streamsize>(b.size()));
}

Waveform sine(double hz, int rate, std::size_t n, double amp = 0.5) {
  Waveform w;
  w.sample_rate_hz = rate;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = amp * std::sin(2 * std::numbers::pi * hz * static_cast<double>(i) / rate);
  }
  return w;
}

MelSpectrogram random_spec(std::size_t frames, numgrad::Rng& rng) {
  MelSpectrogram s(frames);
  for (double& v : s.values()) v = rng.uniform(-5, 5);
  return s;
}

}  // namespace

TEST(Wav, ZerosAndScaleLaw) {
  auto p = temp_path("zeros.wav");
  write_raw_wav(p, 1, 1, 16, std::vector<std::int16_t>(100, 0));
  Waveform w = load_wav(p);
  EXPECT_EQ(w.sample_rate_hz, 16000);
  ASSERT_EQ(w.size(), 100u);
  for (double v : w.samples) EXPECT_EQ(v, 0.0);

  write_raw_wav(p, 1, 1, 16, {16384, -32768, 32767});
  w = load_wav(p);
  EXPECT_EQ(w.samples[0], 0.5);
  EXPECT_EQ(w.samples[1], -1.0);
}

TEST(Wav, RoundTripWithinQuantizationBound) {
  numgrad::Rng rng(1);
  Waveform w;
  for (int i = 0; i < 5000; ++i) w.samples.push_back(rng.uniform(-1.0, 1.0));
  w.samples.push_back(1.0);
  w.samples.push_back(-1.0);
  auto p = temp_path("roundtrip.wav");
  write_wav(p, w);
  Waveform back = load_wav(p);
  ASSERT_EQ(back.size(), w.size());
  double worst = 0;
  for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, std::abs(back.samples[i] - w.samples[i]));
  EXPECT_LE(worst, 1.0 / 32768.0);
  EXPECT_EQ(quantize_pcm16(w).samples, back.samples);
}

TEST(Wav, RejectsWrongCodecAndTruncation) {
  auto p = temp_path("bad.wav");
  write_raw_wav(p, 3, 1, 16, {1, 2, 3});
  EXPECT_THROW(load_wav(p), Error);
  write_raw_wav(p, 1, 2, 16, {1, 2, 3, 4});
  try {
    load_wav(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("num_channels"), std::string::npos);
  }
  write_raw_wav(p, 1, 1, 8, {1, 2});
  EXPECT_THROW(load_wav(p), Error);
  write_raw_wav(p, 1, 1, 16, std::vector<std::int16_t>(50, 7), 60);
  EXPECT_THROW(load_wav(p), Error);
  EXPECT_THROW(load_wav(temp_path("does_not_exist.wav")), Error);
}

TEST(Resample, LengthRule) {
  Waveform w = sine(440, 48000, 48000);
  EXPECT_EQ(resample(w, 16000).size(), 16000u);
  EXPECT_EQ(resample(sine(440, 48000, 1000), 16000).size(), 333u);  // round(333.33)
  EXPECT_EQ(resample(sine(440, 16000, 100), 48000).size(), 300u);
  EXPECT_EQ(resample(sine(440, 22050, 22050), 16000).size(), 16000u);
  EXPECT_THROW(resample(w, 0), Error);
}

TEST(Resample, PreservesDc) {
  Waveform w;
  w.sample_rate_hz = 48000;
  w.samples.assign(4800, 0.7);
  Waveform out = resample(w, 16000);
  for (std::size_t i = 20; i + 20 < out.size(); ++i) EXPECT_NEAR(out.samples[i], 0.7, 1e-3);
}

TEST(Resample, SineCorrelationAgainstAnalyticOracle) {
  Waveform out = resample(sine(1000, 48000, 48000), 16000);
  Waveform ref = sine(1000, 16000, 16000);
  double xy = 0, xx = 0, yy = 0;
  for (std::size_t i = 100; i + 100 < out.size(); ++i) {
    xy += out.samples[i] * ref.samples[i];
    xx += out.samples[i] * out.samples[i];
    yy += ref.samples[i] * ref.samples[i];
  }
  EXPECT_GE(xy / std::sqrt(xx * yy), 0.999);
}

TEST(Resample, RemovesContentAboveNewNyquist) {
  // 7 kHz at 48 kHz aliases to 9 kHz -> must be attenuated going to 16 kHz.
  Waveform out = resample(sine(7000, 48000, 48000), 16000);
  double e = 0;
  for (std::size_t i = 100; i + 100 < out.size(); ++i) e += out.samples[i] * out.samples[i];
  e /= static_cast<double>(out.size() - 200);
  EXPECT_GT(e, 0.01);  // 7 kHz is still below 8 kHz: kept
  Waveform out2 = resample(sine(12000, 48000, 48000), 16000);
  double e2 = 0;
  for (std::size_t i = 100; i + 100 < out2.size(); ++i) e2 += out2.samples[i] * out2.samples[i];
  e2 /= static_cast<double>(out2.size() - 200);
  EXPECT_LT(e2, 1e-4);
}

TEST(LogMel, FrameCountFormula) {
  Waveform w = sine(300, 16000, 16000);
  EXPECT_EQ(log_mel(w).frames(), 98u);
  numgrad::Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    std::size_t n = 400 + rng.below(5000);
    EXPECT_EQ(frame_count(n), (n - 400) / 160 + 1);
  }
  EXPECT_EQ(frame_count(400), 1u);
  EXPECT_EQ(frame_count(559), 1u);
  EXPECT_EQ(frame_count(560), 2u);
  Waveform short_w = sine(300, 16000, 399);
  try {
    log_mel(short_w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("shorter than one window"), std::string::npos);
  }
  Waveform wrong_rate = sine(300, 8000, 8000);
  EXPECT_THROW(log_mel(wrong_rate), Error);
}

TEST(LogMel, SilenceHitsFloor) {
  Waveform w;
  w.samples.assign(4000, 0.0);
  MelSpectrogram s = log_mel(w);
  for (double v : s.values()) EXPECT_EQ(v, std::log(1e-10));
}

TEST(LogMel, ToneArgmaxIsFilterNearestTone) {
  const auto& bank = mel_filterbank();
  std::size_t nearest = 0;
  for (std::size_t m = 0; m < bank.size(); ++m) {
    if (std::abs(bank[m].center_hz - 1000) < std::abs(bank[nearest].center_hz - 1000)) nearest = m;
  }
  MelSpectrogram s = log_mel(sine(1000, 16000, 16000));
  for (std::size_t t = 0; t < s.frames(); ++t) {
    auto row = s.frame(t);
    auto arg = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    EXPECT_EQ(arg, nearest) << "frame " << t;
  }
}

TEST(LogMel, FilterbankCoverage) {
  const auto& bank = mel_filterbank();
  ASSERT_EQ(bank.size(), 80u);
  std::vector<double> total(kSpectrumBins, 0.0);
  for (const auto& f : bank) {
    EXPECT_FALSE(f.weights.empty());
    for (std::size_t j = 0; j < f.weights.size(); ++j) {
      EXPECT_GE(f.weights[j], 0.0);
      total[f.first_bin + j] += f.weights[j];
    }
  }
  // Every bin strictly inside (0, 8000) Hz is covered. The Nyquist bin sits
  // exactly on the last filter's upper edge and receives zero weight.
  for (std::size_t k = 1; k + 1 < kSpectrumBins; ++k) EXPECT_GT(total[k], 0.0) << "bin " << k;
  EXPECT_EQ(total[kSpectrumBins - 1], 0.0);
  EXPECT_NEAR(hz_to_mel_slaney(mel_to_hz_slaney(31.7)), 31.7, 1e-12);
  EXPECT_NEAR(hz_to_mel_slaney(1000.0), 15.0, 1e-12);
}

TEST(LogMel, ShiftCovariantAtHopGranularity) {
  numgrad::Rng rng(4);
  Waveform w;
  for (int i = 0; i < 4000; ++i) w.samples.push_back(rng.uniform(-0.5, 0.5));
  Waveform shifted;
  shifted.samples.assign(w.samples.begin() + 160, w.samples.end());
  MelSpectrogram a = log_mel(w), b = log_mel(shifted);
  ASSERT_EQ(b.frames() + 1, a.frames());
  for (std::size_t t = 0; t < b.frames(); ++t) {
    for (std::size_t f = 0; f < kMelBins; ++f) ASSERT_EQ(b.at(t, f), a.at(t + 1, f));
  }
}

TEST(SpecMae, Examples) {
  numgrad::Rng rng(5);
  MelSpectrogram a = random_spec(7, rng);
  EXPECT_EQ(spec_mae(a, a), 0.0);
  MelSpectrogram b = a;
  for (double& v : b.values()) v += 1.0;
  EXPECT_NEAR(spec_mae(a, b), 1.0, 1e-12);
  EXPECT_THROW(spec_mae(a, random_spec(6, rng)), Error);

  MelSpectrogram c = random_spec(7, rng);
  double naive = 0;
  for (std::size_t t = 0; t < 7; ++t) {
    for (std::size_t f = 0; f < 80; ++f) naive += std::abs(a.at(t, f) - c.at(t, f));
  }
  EXPECT_NEAR(spec_mae(a, c), naive / (7 * 80), 1e-12);
}

TEST(SpecMae, SymmetricAndTriangle) {
  numgrad::Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    auto a = random_spec(5, rng), b = random_spec(5, rng), c = random_spec(5, rng);
    EXPECT_EQ(spec_mae(a, b), spec_mae(b, a));
    EXPECT_LE(spec_mae(a, c), spec_mae(a, b) + spec_mae(b, c) + 1e-12);
  }
}

TEST(Normalize, RoundTripAndZeroMean) {
  numgrad::Rng rng(7);
  std::vector<MelSpectrogram> train;
  for (int i = 0; i < 5; ++i) train.push_back(random_spec(3 + i, rng));
  for (auto& s : train) {
    for (std::size_t t = 0; t < s.frames(); ++t) s.at(t, 10) = -3.25;  // constant bin
  }
  FeatureStats st = compute_stats(train);
  std::vector<MelSpectrogram> normed;
  for (const auto& s : train) {
    normed.push_back(normalize(s, st));
    MelSpectrogram back = denormalize(normed.back(), st);
    for (std::size_t i = 0; i < s.values().size(); ++i) {
      EXPECT_NEAR(back.values()[i], s.values()[i], 1e-9);
    }
  }
  FeatureStats after = compute_stats(normed);
  for (double m : after.mean) EXPECT_LE(std::abs(m), 1e-6);
  for (const auto& s : normed) {
    for (std::size_t t = 0; t < s.frames(); ++t) EXPECT_EQ(s.at(t, 10), 0.0);
  }
  FeatureStats bad{std::vector<double>(79, 0.0), std::vector<double>(79, 1.0)};
  EXPECT_THROW(normalize(train[0], bad), Error);
}
