// include/cleancoder/numgrad/param_store.h

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

#ifndef CLEANCODER_NUMGRAD_PARAM_STORE_H_
#define CLEANCODER_NUMGRAD_PARAM_STORE_H_

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "cleancoder/numgrad/rng.h"
#include "cleancoder/numgrad/tensor.h"

namespace cleancoder::numgrad {

using GradMap = std::map<std::string, Tensor>;

// Named parameter tensors in registration order. Registration order is the
// checkpoint order, so it must not depend on anything but model structure.
class ParamStore {
 public:
  ParamStore() = default;
  ParamStore(const ParamStore& other);
  ParamStore& operator=(const ParamStore& other);
  ParamStore(ParamStore&&) noexcept = default;
  ParamStore& operator=(ParamStore&&) noexcept = default;

  Tensor& add(const std::string& name, Tensor value);
  bool contains(const std::string& name) const { return index_.count(name) > 0; }
  Tensor& get(const std::string& name);
  const Tensor& get(const std::string& name) const;

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  // Total number of scalar values across all tensors.
  std::size_t count() const;
  // Scalar count for names starting with any of the prefixes.
  std::size_t count_with_prefix(const std::vector<std::string>& prefixes) const;
  std::vector<std::string> names_with_prefix(const std::string& prefix) const;

  // Copies every tensor from `other` whose name is also present here.
  // Shapes must agree.
  void assign_from(const ParamStore& other);

 private:
  std::vector<std::string> names_;
  // Stable addresses: graphs hold pointers into these tensors.
  std::vector<std::unique_ptr<Tensor>> tensors_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Glorot-uniform matrix of shape {fan_in, fan_out}.
Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);

}  // namespace cleancoder::numgrad

#endif  // CLEANCODER_NUMGRAD_PARAM_STORE_H_
