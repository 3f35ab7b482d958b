// include/cleancoder/corpus/synth.h

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

#ifndef CLEANCODER_CORPUS_SYNTH_H_
#define CLEANCODER_CORPUS_SYNTH_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cleancoder/dsp/waveform.h"

namespace cleancoder::corpus {

// Twelve-symbol alphabet; symbol k renders at fundamental 110 * 2^(k/12) Hz.
inline constexpr std::string_view kAlphabet = "abcdefghijkl";
inline constexpr std::size_t kSymbolSamples = 1920;  // 120 ms at 16 kHz
inline constexpr std::size_t kSymbolsPerWord = 3;
inline constexpr double kPeakLevel = 0.3;
inline constexpr double kNoiseRms = 0.1;
inline constexpr int kBabbleStreams = 8;

int symbol_index(char c);  // -1 when c is not in the alphabet

// Token ids: blank is 0, alphabet symbol k is k + 1. Spaces are skipped.
std::vector<int> tokenize(std::string_view text);
std::string detokenize(const std::vector<int>& ids);
// Splits a symbol string into consecutive kSymbolsPerWord-symbol words (the
// last word may be shorter). Used to segment hypotheses for WER.
std::vector<std::string> segment_words(std::string_view symbols);
std::vector<std::string> split_words(std::string_view text);

// Fundamental-frequency multiplier for a speaker (a fraction of a semitone).
double speaker_pitch_factor(std::uint64_t speaker_seed);

// Each symbol becomes a 120 ms three-harmonic tone with a Hann envelope;
// segments are concatenated and peak-normalized to 0.3. Spaces in `text` are
// word separators and produce no audio.
dsp::Waveform synth_utterance(std::string_view text, std::uint64_t speaker_seed);

enum class NoiseKind { kWhite, kBabble };
NoiseKind parse_noise_kind(std::string_view s);
std::string to_string(NoiseKind k);

// White: iid uniform[-1, 1]. Babble: sum of 8 random-symbol streams. Both
// are RMS-normalized to 0.1.
dsp::Waveform gen_noise(NoiseKind kind, std::size_t n_samples, std::uint64_t seed);

struct Mixture {
  dsp::Waveform noisy;
  // alpha * noise, tiled/truncated to the clean length, before clipping.
  dsp::Waveform scaled_noise;
  double noise_gain = 0.0;
  std::size_t clipped_samples = 0;
};

// out = clean + alpha * noise with alpha = sqrt(Pc / (Pn * 10^(snr/10))) over
// full-clip mean squares; clipped to [-1, 1] (warning above 0.1% clipped).
Mixture mix_at_snr(const dsp::Waveform& clean, const dsp::Waveform& noise, double snr_db);

}  // namespace cleancoder::corpus

#endif  // CLEANCODER_CORPUS_SYNTH_H_
