// src/corpus/manifest.cc

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

#include "cleancoder/corpus/manifest.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cleancoder/error.h"

namespace cleancoder::corpus {
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string relative_to(const fs::path& p, const fs::path& base) {
  if (p.empty()) return "";
  if (p.is_relative()) return p.generic_string();
  return p.lexically_normal().lexically_relative(base.lexically_normal()).generic_string();
}

fs::path resolve(const std::string& p, const fs::path& base) {
  if (p.empty()) return {};
  fs::path path(p);
  if (path.is_absolute()) return path.lexically_normal();
  return (base / path).lexically_normal();
}

}  // namespace

std::string manifest_line(const ManifestRow& row, const fs::path& base) {
  Json j;
  j["id"] = row.id;
  j["noisy_path"] = relative_to(row.noisy_path, base);
  j["clean_path"] = relative_to(row.clean_path, base);
  j["text"] = row.text;
  j["snr_db"] = row.snr_db;
  j["noise_type"] = row.noise_type;
  j["speaker"] = row.speaker;
  return j.dump();
}

void write_manifest(const fs::path& path, const std::vector<ManifestRow>& rows) {
  const fs::path base = fs::absolute(path).parent_path();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write manifest ", path.string());
  for (const ManifestRow& row : rows) out << manifest_line(row, base) << '\n';
  if (!out) fail("error writing manifest ", path.string());
}

std::vector<ManifestRow> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open manifest ", path.string());
  const fs::path base = fs::absolute(path).parent_path();
  std::vector<ManifestRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      Json j = Json::parse(line);
      ManifestRow r;
      r.id = j.at("id").get<std::string>();
      r.noisy_path = resolve(j.at("noisy_path").get<std::string>(), base);
      r.clean_path = resolve(j.value("clean_path", std::string()), base);
      r.text = j.at("text").get<std::string>();
      r.snr_db = j.value("snr_db", 0.0);
      r.noise_type = j.value("noise_type", std::string());
      r.speaker = j.value("speaker", std::string());
      rows.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      fail(path.string(), ":", line_no, ": bad manifest row: ", e.what());
    }
  }
  return rows;
}

}  // namespace cleancoder::corpus
