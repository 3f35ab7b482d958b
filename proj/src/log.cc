// src/log.cc

// Copyright 2026 The Cleancoder Authors

// See ../COPYING for clarification regarding multiple authors
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

#include "cleancoder/log.h"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <mutex>

namespace cleancoder::log {
namespace {

Level initial_level() {
  const char* env = std::getenv("CLEANCODER_LOG");
  if (env == nullptr) return Level::kInfo;
  if (std::strcmp(env, "debug") == 0) return Level::kDebug;
  if (std::strcmp(env, "warning") == 0) return Level::kWarning;
  if (std::strcmp(env, "error") == 0) return Level::kError;
  if (std::strcmp(env, "silent") == 0) return Level::kSilent;
  return Level::kInfo;
}

std::atomic<Level>& current() {
  static std::atomic<Level> lvl{initial_level()};
  return lvl;
}

std::atomic<std::size_t> g_warnings{0};
std::mutex g_mutex;

void emit(Level lvl, const char* tag, const std::string& msg) {
  if (lvl < current().load()) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << tag << msg << '\n';
}

}  // namespace

void set_level(Level lvl) { current().store(lvl); }
Level level() { return current().load(); }

void debug(const std::string& msg) { emit(Level::kDebug, "DEBUG ", msg); }
void info(const std::string& msg) { emit(Level::kInfo, "LOG ", msg); }
void warning(const std::string& msg) {
  ++g_warnings;
  emit(Level::kWarning, "WARNING ", msg);
}
void error(const std::string& msg) { emit(Level::kError, "ERROR ", msg); }

std::size_t warning_count() { return g_warnings.load(); }

}  // namespace cleancoder::log
