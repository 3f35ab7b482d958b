// include/cleancoder/trainer/model_io.h

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

#ifndef CLEANCODER_TRAINER_MODEL_IO_H_
#define CLEANCODER_TRAINER_MODEL_IO_H_

#include <filesystem>

#include "cleancoder/asr/model.h"
#include "cleancoder/frontend/model.h"
#include "cleancoder/trainer/checkpoint.h"

namespace cleancoder::trainer {

// Checkpoints hold the model tensors followed by norm.mean and norm.std;
// meta records {"kind", "encoder": {...}}.
void save_asr(const std::filesystem::path& path, const asr::AsrModel& model);
asr::AsrModel load_asr(const std::filesystem::path& path);

void save_frontend(const std::filesystem::path& path, const frontend::CleancoderModel& model);
frontend::CleancoderModel load_frontend(const std::filesystem::path& path);

// Frontend initialized from a pretrained ASR checkpoint: encoder tensors and
// feature statistics copied, decoder freshly initialized from `seed`.
frontend::CleancoderModel frontend_from_asr(const asr::AsrModel& backbone, std::uint64_t seed);

Json encoder_config_json(const encoder::EncoderConfig& cfg);
encoder::EncoderConfig encoder_config_from_json(const Json& j);

}  // namespace cleancoder::trainer

#endif  // CLEANCODER_TRAINER_MODEL_IO_H_
