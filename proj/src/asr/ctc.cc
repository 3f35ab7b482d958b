// src/asr/ctc.cc

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

#include "cleancoder/asr/ctc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "cleancoder/error.h"

namespace cleancoder::asr {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

std::size_t ctc_min_frames(const std::vector<int>& target) {
  std::size_t n = target.size();
  for (std::size_t i = 1; i < target.size(); ++i) n += target[i] == target[i - 1];
  return n;
}

CtcResult ctc_forward_backward(const Tensor& log_probs, const std::vector<int>& target) {
  if (log_probs.rank() != 2) fail("ctc: log_probs must be (T, V)");
  const std::size_t t_len = log_probs.rows(), v = log_probs.cols();
  for (int id : target) {
    if (id <= kBlank || static_cast<std::size_t>(id) >= v) {
      fail("ctc: target id ", id, " outside [1, ", v - 1, "]");
    }
  }
  if (ctc_min_frames(target) > t_len) {
    fail("ctc: target unreachable (", target.size(), " labels need ", ctc_min_frames(target),
         " frames, have ", t_len, ")");
  }
  // Blank-augmented labels l'.
  const std::size_t s_len = 2 * target.size() + 1;
  std::vector<int> ext(s_len, kBlank);
  for (std::size_t i = 0; i < target.size(); ++i) ext[2 * i + 1] = target[i];
  auto lp = [&](std::size_t t, std::size_t s) { return log_probs.at(t, ext[s]); };
  auto can_skip = [&](std::size_t s) { return s >= 2 && ext[s] != kBlank && ext[s] != ext[s - 2]; };

  std::vector<double> alpha(t_len * s_len, kNegInf), beta(t_len * s_len, kNegInf);
  auto A = [&](std::size_t t, std::size_t s) -> double& { return alpha[t * s_len + s]; };
  auto B = [&](std::size_t t, std::size_t s) -> double& { return beta[t * s_len + s]; };

  A(0, 0) = lp(0, 0);
  if (s_len > 1) A(0, 1) = lp(0, 1);
  for (std::size_t t = 1; t < t_len; ++t) {
    for (std::size_t s = 0; s < s_len; ++s) {
      double a = A(t - 1, s);
      if (s >= 1) a = log_add(a, A(t - 1, s - 1));
      if (can_skip(s)) a = log_add(a, A(t - 1, s - 2));
      if (a != kNegInf) A(t, s) = a + lp(t, s);
    }
  }
  // beta includes the emission at t.
  B(t_len - 1, s_len - 1) = lp(t_len - 1, s_len - 1);
  if (s_len > 1) B(t_len - 1, s_len - 2) = lp(t_len - 1, s_len - 2);
  for (std::size_t t = t_len - 1; t-- > 0;) {
    for (std::size_t s = 0; s < s_len; ++s) {
      double b = B(t + 1, s);
      if (s + 1 < s_len) b = log_add(b, B(t + 1, s + 1));
      if (s + 2 < s_len && can_skip(s + 2)) b = log_add(b, B(t + 1, s + 2));
      if (b != kNegInf) B(t, s) = b + lp(t, s);
    }
  }
  double log_p = A(t_len - 1, s_len - 1);
  if (s_len > 1) log_p = log_add(log_p, A(t_len - 1, s_len - 2));
  if (!std::isfinite(log_p)) fail("ctc: target unreachable (zero path probability)");

  CtcResult r;
  r.loss = -log_p;
  r.grad = Tensor(log_probs.shape(), 0.0);
  std::vector<double> occ(v);
  for (std::size_t t = 0; t < t_len; ++t) {
    std::fill(occ.begin(), occ.end(), kNegInf);
    for (std::size_t s = 0; s < s_len; ++s) {
      if (A(t, s) == kNegInf || B(t, s) == kNegInf) continue;
      occ[ext[s]] = log_add(occ[ext[s]], A(t, s) + B(t, s) - lp(t, s));
    }
    for (std::size_t k = 0; k < v; ++k) {
      if (occ[k] != kNegInf) r.grad.at(t, k) = -std::exp(occ[k] - log_p);
    }
  }
  return r;
}

double ctc_loss(const Tensor& log_probs, const std::vector<int>& target) {
  return ctc_forward_backward(log_probs, target).loss;
}

numgrad::Var ctc_loss_node(numgrad::Graph& g, numgrad::Var log_probs, std::vector<int> target) {
  auto op = std::make_shared<numgrad::CustomOp>();
  auto grad = std::make_shared<Tensor>();
  op->forward = [target, grad](const std::vector<const Tensor*>& in) {
    CtcResult r = ctc_forward_backward(*in[0], target);
    *grad = std::move(r.grad);
    return Tensor::scalar(r.loss);
  };
  op->backward = [grad](const std::vector<const Tensor*>&, const Tensor&,
                        const Tensor& grad_out) {
    Tensor gl = *grad;
    const double scale = grad_out.item();
    for (double& x : gl.values()) x *= scale;
    return std::vector<Tensor>{std::move(gl)};
  };
  return g.custom({log_probs}, std::move(op), "ctc");
}

std::vector<int> greedy_decode(const Tensor& log_probs) {
  std::vector<int> out;
  int prev = -1;
  for (std::size_t t = 0; t < log_probs.rows(); ++t) {
    auto row = log_probs.row(t);
    const int best = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
    if (best != prev && best != kBlank) out.push_back(best);
    prev = best;
  }
  return out;
}

}  // namespace cleancoder::asr
