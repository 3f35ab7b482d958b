// include/cleancoder/trainer/optim.h

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

#ifndef CLEANCODER_TRAINER_OPTIM_H_
#define CLEANCODER_TRAINER_OPTIM_H_

#include <map>
#include <string>

#include "cleancoder/numgrad/param_store.h"

namespace cleancoder::trainer {

using numgrad::GradMap;
using numgrad::ParamStore;
using numgrad::Tensor;

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.98;
  double epsilon = 1e-8;
  double weight_decay = 0.0;
};

// Adam with decoupled weight decay. Only parameters present in the gradient
// map are touched, so frozen tensors stay bit-identical.
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  // p <- p * (1 - lr * wd); m, v update; p <- p - lr * m_hat / (sqrt(v_hat) + eps).
  void step(ParamStore& params, const GradMap& grads, double lr);

  std::size_t steps() const { return steps_; }
  const Tensor& first_moment(const std::string& name) const { return m_.at(name); }
  const Tensor& second_moment(const std::string& name) const { return v_.at(name); }

 private:
  AdamConfig config_;
  std::size_t steps_ = 0;
  std::map<std::string, Tensor> m_, v_;
};

// max(min_lr, peak * sqrt(warmup) * min(step^-1/2, step * warmup^-3/2)); equals
// `peak` at step == warmup. step >= 1.
double noam_lr(std::size_t step, double peak, std::size_t warmup, double min_lr);

}  // namespace cleancoder::trainer

#endif  // CLEANCODER_TRAINER_OPTIM_H_
