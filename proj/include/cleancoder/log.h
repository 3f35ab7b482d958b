// include/cleancoder/log.h

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

#ifndef CLEANCODER_LOG_H_
#define CLEANCODER_LOG_H_

#include <cstddef>
#include <string>

namespace cleancoder::log {

enum class Level { kDebug = 0, kInfo = 1, kWarning = 2, kError = 3, kSilent = 4 };

// Messages below this level are dropped. Defaults to kInfo, or to the value of
// CLEANCODER_LOG (debug|info|warning|error|silent) when set.
void set_level(Level level);
Level level();

void debug(const std::string& msg);
void info(const std::string& msg);
void warning(const std::string& msg);
void error(const std::string& msg);

// Number of warnings emitted since process start.
std::size_t warning_count();

}  // namespace cleancoder::log

#endif  // CLEANCODER_LOG_H_
