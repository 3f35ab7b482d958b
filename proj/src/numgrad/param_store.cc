// src/numgrad/param_store.cc

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

#include "cleancoder/numgrad/param_store.h"

#include <cmath>
#include <memory>

namespace cleancoder::numgrad {

ParamStore::ParamStore(const ParamStore& other) { *this = other; }

ParamStore& ParamStore::operator=(const ParamStore& other) {
  if (this == &other) return *this;
  names_.clear();
  tensors_.clear();
  index_.clear();
  for (const auto& name : other.names_) add(name, other.get(name));
  return *this;
}

Tensor& ParamStore::add(const std::string& name, Tensor value) {
  if (contains(name)) fail("parameter '", name, "' registered twice");
  index_.emplace(name, names_.size());
  names_.push_back(name);
  tensors_.push_back(std::make_unique<Tensor>(std::move(value)));
  return *tensors_.back();
}

Tensor& ParamStore::get(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) fail("unknown parameter '", name, "'");
  return *tensors_[it->second];
}

const Tensor& ParamStore::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) fail("unknown parameter '", name, "'");
  return *tensors_[it->second];
}

std::size_t ParamStore::count() const {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t->size();
  return n;
}

std::size_t ParamStore::count_with_prefix(const std::vector<std::string>& prefixes) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (const auto& p : prefixes) {
      if (names_[i].rfind(p, 0) == 0) {
        n += tensors_[i]->size();
        break;
      }
    }
  }
  return n;
}

std::vector<std::string> ParamStore::names_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& n : names_) {
    if (n.rfind(prefix, 0) == 0) out.push_back(n);
  }
  return out;
}

void ParamStore::assign_from(const ParamStore& other) {
  for (const auto& name : other.names()) {
    if (!contains(name)) continue;
    Tensor& dst = get(name);
    const Tensor& src = other.get(name);
    if (dst.shape() != src.shape()) {
      fail("parameter '", name, "' shape ", shape_string(dst.shape()), " vs ",
           shape_string(src.shape()));
    }
    dst = src;
  }
}

Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  Tensor w({fan_in, fan_out});
  double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (auto& v : w.values()) v = rng.uniform(-a, a);
  return w;
}

}  // namespace cleancoder::numgrad
