// include/cleancoder/dsp/waveform.h

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

#ifndef CLEANCODER_DSP_WAVEFORM_H_
#define CLEANCODER_DSP_WAVEFORM_H_

#include <filesystem>
#include <vector>

namespace cleancoder::dsp {

inline constexpr int kWorkingRateHz = 16000;

// Mono audio. Samples are nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = kWorkingRateHz;

  std::size_t size() const { return samples.size(); }
  double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
};

double mean_square(const Waveform& w);
double rms(const Waveform& w);

// RIFF/WAVE, PCM 16-bit little-endian, mono. Samples are scaled by 1/32768.
Waveform load_wav(const std::filesystem::path& path);
// Writes PCM16 mono; samples are rounded to the nearest step and clamped.
void write_wav(const std::filesystem::path& path, const Waveform& w);
// The value load_wav(write_wav(w)) would return, without touching disk.
Waveform quantize_pcm16(const Waveform& w);

// Rational-ratio polyphase windowed-sinc resampler (Kaiser beta 8, 32 taps
// per phase). Output length is round(n * target / source).
Waveform resample(const Waveform& w, int target_hz);

}  // namespace cleancoder::dsp

#endif  // CLEANCODER_DSP_WAVEFORM_H_
