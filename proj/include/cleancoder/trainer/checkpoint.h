// include/cleancoder/trainer/checkpoint.h

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

#ifndef CLEANCODER_TRAINER_CHECKPOINT_H_
#define CLEANCODER_TRAINER_CHECKPOINT_H_

#include <filesystem>

#include <json.hpp>

#include "cleancoder/numgrad/param_store.h"

namespace cleancoder::trainer {

using Json = nlohmann::ordered_json;

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout (little-endian):
//   "CLNC" | u32 version | u32 header_bytes | header JSON |
//   f32 payload in header order | u32 CRC32 of everything before it.
// Header: {"tensors": [{"name", "shape"}...], "meta": {...}}.
void save_checkpoint(const std::filesystem::path& path, const numgrad::ParamStore& tensors,
                     const Json& meta = Json::object());

struct LoadedCheckpoint {
  numgrad::ParamStore tensors;
  Json meta;
};
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

// Rounds every value to the nearest float, as a save/load round trip would.
numgrad::ParamStore round_to_float(const numgrad::ParamStore& tensors);

}  // namespace cleancoder::trainer

#endif  // CLEANCODER_TRAINER_CHECKPOINT_H_
