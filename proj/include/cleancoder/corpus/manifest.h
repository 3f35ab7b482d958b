// include/cleancoder/corpus/manifest.h

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

#ifndef CLEANCODER_CORPUS_MANIFEST_H_
#define CLEANCODER_CORPUS_MANIFEST_H_

#include <filesystem>
#include <string>
#include <vector>

namespace cleancoder::corpus {

// One JSONL object per row. Paths are stored relative to the manifest's
// directory and are absolute after read_manifest().
struct ManifestRow {
  std::string id;
  std::filesystem::path noisy_path;
  std::filesystem::path clean_path;  // may be empty for ASR-only manifests
  std::string text;
  double snr_db = 0.0;
  std::string noise_type;
  std::string speaker;
};

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestRow>& rows);

// Single JSONL line (no trailing newline); paths written relative to `base`.
std::string manifest_line(const ManifestRow& row, const std::filesystem::path& base);

}  // namespace cleancoder::corpus

#endif  // CLEANCODER_CORPUS_MANIFEST_H_
