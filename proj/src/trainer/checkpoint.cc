// src/trainer/checkpoint.cc

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

#include "cleancoder/trainer/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "cleancoder/error.h"

namespace cleancoder::trainer {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

constexpr char kMagic[4] = {'C', 'L', 'N', 'C'};

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

std::uint32_t get_u32(const std::string& in, std::size_t pos) {
  std::uint32_t v;
  std::memcpy(&v, in.data() + pos, 4);
  return v;
}

std::uint32_t crc_of(const std::string& bytes, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(n));
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const numgrad::ParamStore& tensors,
                     const Json& meta) {
  Json header;
  header["tensors"] = Json::array();
  for (const std::string& name : tensors.names()) {
    header["tensors"].push_back({{"name", name}, {"shape", tensors.get(name).shape()}});
  }
  header["meta"] = meta;
  const std::string text = header.dump();

  std::string bytes(kMagic, 4);
  put_u32(bytes, kCheckpointVersion);
  put_u32(bytes, static_cast<std::uint32_t>(text.size()));
  bytes += text;
  for (const std::string& name : tensors.names()) {
    for (double v : tensors.get(name).values()) {
      const float f = static_cast<float>(v);
      char b[4];
      std::memcpy(b, &f, 4);
      bytes.append(b, 4);
    }
  }
  put_u32(bytes, crc_of(bytes, bytes.size()));

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) fail("cannot write checkpoint ", path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail("error writing checkpoint ", path.string());
  }
  std::filesystem::rename(tmp, path);
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open checkpoint ", path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  const std::string where = "checkpoint " + path.string();
  if (bytes.size() < 16) fail(where, ": truncated (CRC mismatch)");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) fail(where, ": bad magic");
  const std::size_t body = bytes.size() - 4;
  if (crc_of(bytes, body) != get_u32(bytes, body)) fail(where, ": CRC mismatch");
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kCheckpointVersion) fail(where, ": unsupported version ", version);
  const std::uint32_t header_len = get_u32(bytes, 8);
  if (12 + static_cast<std::size_t>(header_len) > body) fail(where, ": header overruns file");

  LoadedCheckpoint out;
  Json header;
  try {
    header = Json::parse(bytes.substr(12, header_len));
  } catch (const nlohmann::json::exception& e) {
    fail(where, ": bad header: ", e.what());
  }
  out.meta = header.value("meta", Json::object());
  std::size_t pos = 12 + header_len;
  for (const auto& entry : header.at("tensors")) {
    const auto shape = entry.at("shape").get<numgrad::Shape>();
    const std::size_t n = numgrad::shape_size(shape);
    if (pos + 4 * n > body) fail(where, ": payload shorter than header declares");
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i, pos += 4) {
      float f;
      std::memcpy(&f, bytes.data() + pos, 4);
      values[i] = f;
    }
    out.tensors.add(entry.at("name").get<std::string>(), numgrad::Tensor(shape, std::move(values)));
  }
  if (pos != body) fail(where, ": payload longer than header declares");
  return out;
}

numgrad::ParamStore round_to_float(const numgrad::ParamStore& tensors) {
  numgrad::ParamStore out = tensors;
  for (const std::string& name : out.names()) {
    for (double& v : out.get(name).values()) v = static_cast<float>(v);
  }
  return out;
}

}  // namespace cleancoder::trainer
