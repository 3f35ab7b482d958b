// src/asr/wer.cc

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

#include "cleancoder/asr/wer.h"

#include <algorithm>
#include <numeric>

#include "cleancoder/corpus/synth.h"

namespace cleancoder::asr {

std::size_t edit_distance(const Words& a, const Words& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double wer(const Words& ref, const Words& hyp) {
  if (ref.empty()) return static_cast<double>(hyp.size());
  return static_cast<double>(edit_distance(ref, hyp)) / static_cast<double>(ref.size());
}

std::string hypothesis_text(const std::vector<int>& hyp_ids) {
  std::string out;
  for (const std::string& w : corpus::segment_words(corpus::detokenize(hyp_ids))) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

double transcript_wer(const std::string& ref_text, const std::vector<int>& hyp_ids) {
  return wer(corpus::split_words(ref_text), corpus::split_words(hypothesis_text(hyp_ids)));
}

}  // namespace cleancoder::asr
