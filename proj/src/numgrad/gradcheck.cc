// src/numgrad/gradcheck.cc

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

#include "cleancoder/numgrad/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cleancoder/numgrad/rng.h"

namespace cleancoder::numgrad {

Real GradCheckReport::worst() const {
  Real w = 0;
  for (const auto& p : params) w = std::max(w, p.max_rel_error);
  return w;
}

const ParamCheck* GradCheckReport::find(const std::string& name) const {
  for (const auto& p : params) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

GradCheckReport check_gradients(Graph& graph, Var loss, Real tolerance,
                                const GradCheckOptions& options) {
  const Feeds feeds = graph.last_feeds();
  graph.forward(feeds);
  const GradMap analytic = graph.backward(loss);

  GradCheckReport report;
  report.tolerance = tolerance;
  Rng rng(options.seed);
  const Real h = options.step;

  for (const auto& [name, grad] : analytic) {
    Tensor* param = graph.parameter_tensor(name);
    std::vector<std::size_t> entries(param->size());
    std::iota(entries.begin(), entries.end(), std::size_t{0});
    if (options.max_entries_per_param > 0 && entries.size() > options.max_entries_per_param) {
      for (std::size_t i = 0; i < options.max_entries_per_param; ++i) {
        std::swap(entries[i], entries[i + rng.below(entries.size() - i)]);
      }
      entries.resize(options.max_entries_per_param);
    }

    ParamCheck check{name, 0.0, entries.size()};
    for (std::size_t idx : entries) {
      const Real saved = (*param)[idx];
      (*param)[idx] = saved + h;
      graph.forward(feeds);
      const Real up = graph.value(loss).item();
      (*param)[idx] = saved - h;
      graph.forward(feeds);
      const Real down = graph.value(loss).item();
      (*param)[idx] = saved;

      const Real numeric = (up - down) / (2.0 * h);
      const Real ga = grad[idx];
      const Real rel = std::abs(ga - numeric) / std::max(1e-8, std::abs(ga) + std::abs(numeric));
      check.max_rel_error = std::max(check.max_rel_error, rel);
    }
    if (check.max_rel_error > tolerance) report.passed = false;
    report.params.push_back(check);
  }

  graph.forward(feeds);
  return report;
}

}  // namespace cleancoder::numgrad
