// tests/unit/corpus_test.cc

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
#include <complex>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "cleancoder/corpus/batching.h"
#include "cleancoder/corpus/builder.h"
#include "cleancoder/corpus/manifest.h"
#include "cleancoder/corpus/synth.h"
#include "cleancoder/dsp/mel.h"
#include "cleancoder/error.h"
#include "cleancoder/numgrad/rng.h"

using namespace cleancoder;
using namespace cleancoder::corpus;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / "cleancoder_corpus_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double power(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s / static_cast<double>(v.size());
}

CorpusConfig small_config() {
  CorpusConfig c;
  c.train = 12;
  c.val = 8;
  c.test = 16;
  c.train_speakers = 4;
  c.val_speakers = 2;
  c.test_speakers = 2;
  c.seed = 7;
  return c;
}

}  // namespace

TEST(Synth, DurationIsSymbolCountTimes120ms) {
  dsp::Waveform w = synth_utterance("abcde", 3);
  EXPECT_EQ(w.size(), 9600u);
  EXPECT_EQ(w.sample_rate_hz, 16000);
  EXPECT_EQ(synth_utterance("abc de", 3).size(), 9600u);
  double peak = 0;
  for (double v : w.samples) peak = std::max(peak, std::abs(v));
  EXPECT_NEAR(peak, 0.3, 1e-12);
}

TEST(Synth, Deterministic) {
  EXPECT_EQ(synth_utterance("abc lkj", 11).samples, synth_utterance("abc lkj", 11).samples);
  EXPECT_NE(synth_utterance("abc lkj", 11).samples, synth_utterance("abc lkj", 12).samples);
}

TEST(Synth, DistinctSymbolsHaveDistinctDominantBins) {
  // Argmax of the mean log-Mel frame over each segment's interior.
  auto dominant = [](char c) {
    dsp::MelSpectrogram m = dsp::log_mel(synth_utterance(std::string(1, c), 5));
    std::vector<double> mean(dsp::kMelBins, 0.0);
    for (std::size_t t = 2; t + 2 < m.frames(); ++t) {
      for (std::size_t f = 0; f < dsp::kMelBins; ++f) mean[f] += m.at(t, f);
    }
    return std::max_element(mean.begin(), mean.end()) - mean.begin();
  };
  EXPECT_NE(dominant('a'), dominant('l'));
  EXPECT_NE(dominant('a'), dominant('g'));
}

TEST(Synth, Errors) {
  EXPECT_THROW(synth_utterance("", 1), Error);
  EXPECT_THROW(synth_utterance("   ", 1), Error);
  EXPECT_THROW(synth_utterance("abz", 1), Error);
  EXPECT_THROW(parse_noise_kind("pink"), Error);
}

TEST(Text, TokenizeAndWords) {
  EXPECT_EQ(tokenize("ab l"), (std::vector<int>{1, 2, 12}));
  EXPECT_EQ(detokenize({1, 2, 12}), "abl");
  EXPECT_EQ(segment_words("abcdefg"), (std::vector<std::string>{"abc", "def", "g"}));
  EXPECT_EQ(split_words("  abc  def "), (std::vector<std::string>{"abc", "def"}));
  EXPECT_TRUE(segment_words("").empty());
}

TEST(Noise, WhiteRms) {
  dsp::Waveform w = gen_noise(NoiseKind::kWhite, 16000, 9);
  EXPECT_NEAR(dsp::rms(w), 0.1, 1e-6);
  EXPECT_EQ(w.samples, gen_noise(NoiseKind::kWhite, 16000, 9).samples);
  dsp::Waveform one = gen_noise(NoiseKind::kWhite, 1, 9);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_TRUE(std::isfinite(one.samples[0]));
  EXPECT_THROW(gen_noise(NoiseKind::kWhite, 0, 9), Error);
}

TEST(Noise, BabbleEnergyBelow2kHz) {
  const std::size_t n = 4096;
  dsp::Waveform w = gen_noise(NoiseKind::kBabble, n, 21);
  EXPECT_NEAR(dsp::rms(w), 0.1, 1e-6);
  // Direct DFT oracle.
  double low = 0, total = 0;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += w.samples[i] * std::polar(1.0, -2 * std::numbers::pi * double(k * i % n) / double(n));
    }
    const double e = std::norm(acc);
    total += e;
    if (k * 16000.0 / n < 2000.0) low += e;
  }
  EXPECT_GE(low / total, 0.7);
}

TEST(Mix, ClosedFormGain) {
  dsp::Waveform a = gen_noise(NoiseKind::kWhite, 1000, 1);
  dsp::Waveform b = gen_noise(NoiseKind::kWhite, 1000, 2);
  for (double& v : a.samples) v *= 0.5;
  for (double& v : b.samples) v *= 0.5;
  // Equalize powers exactly.
  const double g = std::sqrt(power(a.samples) / power(b.samples));
  for (double& v : b.samples) v *= g;
  EXPECT_NEAR(mix_at_snr(a, b, 0.0).noise_gain, 1.0, 1e-12);
  EXPECT_NEAR(mix_at_snr(a, b, 20.0).noise_gain, 0.1, 1e-12);
}

TEST(Mix, MeasuredSnrMatchesTarget) {
  numgrad::Rng rng(77);
  for (double snr : {2.5, 7.5, 12.5, 17.5}) {
    for (int pair = 0; pair < 50; ++pair) {
      std::string text;
      for (int s = 0; s < 6; ++s) text.push_back(kAlphabet[rng.below(12)]);
      dsp::Waveform clean = synth_utterance(text, rng.next());
      NoiseKind kind = pair % 2 ? NoiseKind::kBabble : NoiseKind::kWhite;
      dsp::Waveform noise = gen_noise(kind, 5000 + rng.below(8000), rng.next());
      Mixture m = mix_at_snr(clean, noise, snr);
      ASSERT_EQ(m.noisy.size(), clean.size());
      const double measured =
          10.0 * std::log10(power(clean.samples) / power(m.scaled_noise.samples));
      EXPECT_NEAR(measured, snr, 0.01);
    }
  }
}

TEST(Mix, Errors) {
  dsp::Waveform clean = synth_utterance("abc", 1);
  dsp::Waveform silent;
  silent.samples.assign(100, 0.0);
  EXPECT_THROW(mix_at_snr(silent, clean, 5), Error);
  EXPECT_THROW(mix_at_snr(clean, silent, 5), Error);
  dsp::Waveform other = clean;
  other.sample_rate_hz = 8000;
  EXPECT_THROW(mix_at_snr(clean, other, 5), Error);
}

TEST(Manifest, RoundTripAndKeyOrder) {
  fs::path dir = temp_dir("manifest");
  ManifestRow r{"x_1", dir / "n.wav", dir / "c.wav", "abc def", 7.5, "white", "spk001"};
  write_manifest(dir / "m.jsonl", {r});
  std::string text = slurp(dir / "m.jsonl");
  EXPECT_EQ(text,
            "{\"id\":\"x_1\",\"noisy_path\":\"n.wav\",\"clean_path\":\"c.wav\",\"text\":\"abc "
            "def\",\"snr_db\":7.5,\"noise_type\":\"white\",\"speaker\":\"spk001\"}\n");
  auto rows = read_manifest(dir / "m.jsonl");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].noisy_path, (dir / "n.wav").lexically_normal());
  EXPECT_EQ(rows[0].text, "abc def");
  EXPECT_EQ(rows[0].snr_db, 7.5);
  std::ofstream(dir / "bad.jsonl") << "{\"id\": 3}\n";
  EXPECT_THROW(read_manifest(dir / "bad.jsonl"), Error);
}

TEST(Corpus, PlanStratifiesAndSeparatesSpeakers) {
  CorpusConfig cfg;
  auto test = plan_split(cfg, 2);
  ASSERT_EQ(test.size(), 100u);
  std::map<double, int> per_snr;
  std::map<std::pair<double, std::string>, int> per_cell;
  for (const auto& p : test) {
    ++per_snr[p.row.snr_db];
    ++per_cell[{p.row.snr_db, p.row.noise_type}];
  }
  ASSERT_EQ(per_snr.size(), 4u);
  for (auto [snr, n] : per_snr) EXPECT_NEAR(n, 25, 1) << snr;
  EXPECT_EQ(per_cell.size(), 8u);

  std::set<std::string> ids;
  std::set<std::uint64_t> seeds[3];
  for (std::size_t s = 0; s < 3; ++s) {
    for (const auto& p : plan_split(cfg, s)) {
      EXPECT_TRUE(ids.insert(p.row.id).second);
      seeds[s].insert(p.speaker_seed);
    }
  }
  EXPECT_EQ(seeds[0].size(), 40u);
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      for (auto v : seeds[a]) EXPECT_EQ(seeds[b].count(v), 0u);
    }
  }
}

TEST(Corpus, BuildWritesAlignedDeterministicPairs) {
  CorpusConfig cfg = small_config();
  fs::path a = temp_dir("build_a"), b = temp_dir("build_b");
  CorpusSummary s = build_corpus(cfg, a);
  build_corpus(cfg, b);
  EXPECT_EQ(s.rows[0], 12u);
  EXPECT_EQ(s.rows[1], 8u);
  EXPECT_EQ(s.rows[2], 16u);
  for (const auto& split : split_names()) {
    EXPECT_EQ(slurp(manifest_path(a, split)), slurp(manifest_path(b, split)));
  }
  auto rows = read_manifest(manifest_path(a, "val"));
  auto plans = plan_split(cfg, 1);
  ASSERT_EQ(rows.size(), plans.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    dsp::Waveform clean = dsp::load_wav(rows[i].clean_path);
    dsp::Waveform noisy = dsp::load_wav(rows[i].noisy_path);
    EXPECT_EQ(clean.size(), noisy.size());
    EXPECT_EQ(clean.samples, render_row(plans[i]).clean.samples);
    EXPECT_EQ(slurp(rows[i].noisy_path), slurp(b / "wav_noisy" / (rows[i].id + ".wav")));
  }
}

TEST(Corpus, DefaultConfigCounts) {
  fs::path dir = temp_dir("default");
  CorpusSummary s = build_corpus(CorpusConfig{}, dir);
  EXPECT_EQ(s.rows[0] + s.rows[1] + s.rows[2], 1000u);
  std::size_t clean = 0, noisy = 0;
  for (auto& e : fs::directory_iterator(dir / "wav_clean")) clean += e.path().extension() == ".wav";
  for (auto& e : fs::directory_iterator(dir / "wav_noisy")) noisy += e.path().extension() == ".wav";
  EXPECT_EQ(clean, 1000u);
  EXPECT_EQ(noisy, 1000u);
  EXPECT_EQ(std::distance(fs::directory_iterator(dir / "manifests"), fs::directory_iterator()), 3);
  fs::remove_all(dir);
}

TEST(Corpus, RejectsBadCounts) {
  CorpusConfig cfg = small_config();
  cfg.val = 0;
  EXPECT_THROW(build_corpus(cfg, temp_dir("bad")), ConfigError);
}

namespace {

std::vector<Utterance> fake_utterances(std::size_t n, std::uint64_t seed) {
  numgrad::Rng rng(seed);
  std::vector<Utterance> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t t = 3 + rng.below(9);
    out[i].row.id = "u" + std::to_string(i);
    out[i].input = dsp::MelSpectrogram(t);
    out[i].target = dsp::MelSpectrogram(t);
    for (double& v : out[i].input.values()) v = rng.normal();
    for (double& v : out[i].target.values()) v = rng.normal();
    out[i].tokens = {1 + static_cast<int>(i % 12)};
  }
  return out;
}

dsp::FeatureStats unit_stats() {
  return {std::vector<double>(dsp::kMelBins, 0.0), std::vector<double>(dsp::kMelBins, 1.0)};
}

}  // namespace

TEST(Batching, SizesAndOrder) {
  auto data = fake_utterances(10, 1);
  BatchOptions opt;
  opt.batch_size = 4;
  opt.shuffle_seed = 5;
  auto plan = plan_batches(data, opt);
  ASSERT_EQ(plan.size(), 3u);
  EXPECT_EQ(plan[0].size(), 4u);
  EXPECT_EQ(plan[1].size(), 4u);
  EXPECT_EQ(plan[2].size(), 2u);
  EXPECT_EQ(plan, plan_batches(data, opt));
  opt.shuffle_seed = 6;
  EXPECT_NE(plan, plan_batches(data, opt));
  std::set<std::size_t> seen;
  for (auto& b : plan) seen.insert(b.begin(), b.end());
  EXPECT_EQ(seen.size(), 10u);
}

TEST(Batching, PaddingAndMask) {
  auto data = fake_utterances(3, 2);
  Batch b = assemble_batch(data, {0, 1, 2}, unit_stats(), true);
  const std::size_t tmax = b.max_frames();
  for (std::size_t n = 0; n < 3; ++n) {
    EXPECT_EQ(b.lengths[n], data[n].input.frames());
    for (std::size_t t = 0; t < tmax; ++t) {
      EXPECT_EQ(b.pad_mask.at(n, t), t < b.lengths[n] ? 1.0 : 0.0);
      const double v = b.specs[(n * tmax + t) * dsp::kMelBins];
      EXPECT_EQ(v, t < b.lengths[n] ? data[n].input.at(t, 0) : dsp::log_floor());
    }
    EXPECT_EQ(b.input(n).values()[0], data[n].input.at(0, 0));
  }
}

TEST(Batching, MaskedMaeIsFrameWeightedMean) {
  auto data = fake_utterances(7, 3);
  Batch b = assemble_batch(data, {0, 1, 2, 3, 4, 5, 6}, unit_stats(), true);
  double weighted = 0, frames = 0;
  for (std::size_t n = 0; n < 7; ++n) {
    const double mae = dsp::spec_mae(data[n].input, data[n].target);
    weighted += mae * data[n].input.frames();
    frames += data[n].input.frames();
  }
  EXPECT_NEAR(masked_mae(b.specs, b.targets, b.pad_mask), weighted / frames, 1e-12);
}

TEST(Batching, CapSkipsLongItems) {
  auto data = fake_utterances(10, 4);
  BatchOptions opt;
  opt.batch_size = 100;
  opt.max_frames = 6;
  auto plan = plan_batches(data, opt);
  std::size_t expected = 0;
  for (auto& u : data) expected += u.input.frames() <= 6;
  ASSERT_EQ(plan.size(), 1u);
  EXPECT_EQ(plan[0].size(), expected);
}
