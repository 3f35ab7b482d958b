// include/cleancoder/numgrad/gradcheck.h

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

#ifndef CLEANCODER_NUMGRAD_GRADCHECK_H_
#define CLEANCODER_NUMGRAD_GRADCHECK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cleancoder/numgrad/graph.h"

namespace cleancoder::numgrad {

struct GradCheckOptions {
  Real step = 1e-5;
  // 0 checks every entry; otherwise a seeded sample of at most this many
  // entries per parameter tensor.
  std::size_t max_entries_per_param = 0;
  std::uint64_t seed = 0;
};

struct ParamCheck {
  std::string name;
  Real max_rel_error = 0.0;
  std::size_t entries_checked = 0;
};

struct GradCheckReport {
  std::vector<ParamCheck> params;
  Real tolerance = 0.0;
  bool passed = true;

  Real worst() const;
  const ParamCheck* find(const std::string& name) const;
};

// Compares backward() against central differences for every non-frozen
// parameter. Relative error per entry is |ga - gn| / max(1e-8, |ga| + |gn|).
// Re-runs forward with the graph's last feeds; parameter values are restored.
GradCheckReport check_gradients(Graph& graph, Var loss, Real tolerance,
                                const GradCheckOptions& options = {});

}  // namespace cleancoder::numgrad

#endif  // CLEANCODER_NUMGRAD_GRADCHECK_H_
