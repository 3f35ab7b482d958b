// src/trainer/optim.cc

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

#include "cleancoder/trainer/optim.h"

#include <algorithm>
#include <cmath>

#include "cleancoder/error.h"

namespace cleancoder::trainer {

void Adam::step(ParamStore& params, const GradMap& grads, double lr) {
  ++steps_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  const double decay = 1.0 - lr * config_.weight_decay;
  for (const auto& [name, g] : grads) {
    Tensor& p = params.get(name);
    if (p.shape() != g.shape()) {
      fail("adam: gradient for ", name, " has shape ", numgrad::shape_string(g.shape()),
           ", parameter has ", numgrad::shape_string(p.shape()));
    }
    auto [mit, fresh] = m_.try_emplace(name, p.shape(), 0.0);
    if (fresh) v_.emplace(name, Tensor(p.shape(), 0.0));
    Tensor& m = mit->second;
    Tensor& v = v_.at(name);
    double* pd = p.data();
    double* md = m.data();
    double* vd = v.data();
    const double* gd = g.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
      pd[i] *= decay;
      md[i] = b1 * md[i] + (1.0 - b1) * gd[i];
      vd[i] = b2 * vd[i] + (1.0 - b2) * gd[i] * gd[i];
      pd[i] -= lr * (md[i] / c1) / (std::sqrt(vd[i] / c2) + config_.epsilon);
    }
  }
}

double noam_lr(std::size_t step, double peak, std::size_t warmup, double min_lr) {
  if (step == 0) fail("noam_lr: step must be >= 1");
  if (warmup == 0) fail("noam_lr: warmup must be >= 1");
  const double s = static_cast<double>(step), w = static_cast<double>(warmup);
  // Same as peak * sqrt(w) * min(s^-1/2, s w^-3/2), arranged so step == warmup
  // yields peak exactly.
  const double lr = step < warmup ? peak * (s / w) : peak * std::sqrt(w / s);
  return std::max(min_lr, lr);
}

}  // namespace cleancoder::trainer
