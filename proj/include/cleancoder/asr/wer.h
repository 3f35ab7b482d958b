// include/cleancoder/asr/wer.h

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

#ifndef CLEANCODER_ASR_WER_H_
#define CLEANCODER_ASR_WER_H_

#include <string>
#include <vector>

namespace cleancoder::asr {

using Words = std::vector<std::string>;

// Levenshtein distance with unit costs.
std::size_t edit_distance(const Words& a, const Words& b);

// edit_distance / max(1, |ref|); an empty reference gives |hyp|.
double wer(const Words& ref, const Words& hyp);

// Reference words are whitespace tokens of the transcript; the hypothesis
// symbol string is cut into 3-symbol words.
double transcript_wer(const std::string& ref_text, const std::vector<int>& hyp_ids);
std::string hypothesis_text(const std::vector<int>& hyp_ids);

}  // namespace cleancoder::asr

#endif  // CLEANCODER_ASR_WER_H_
