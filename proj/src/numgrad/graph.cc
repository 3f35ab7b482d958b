// src/numgrad/graph.cc

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

#include "cleancoder/numgrad/graph.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace cleancoder::numgrad {
namespace {

using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<Matrix>;
using ConstMatrixMap = Eigen::Map<const Matrix>;

// Neumaier summation; keeps scalar reductions accurate enough for
// finite-difference checks of small gradient entries.
class CompensatedSum {
 public:
  void add(Real v) {
    const Real t = sum_ + v;
    comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
    sum_ = t;
  }
  Real value() const { return sum_ + comp_; }

 private:
  Real sum_ = 0.0;
  Real comp_ = 0.0;
};

ConstMatrixMap as_matrix(const Tensor& t) {
  return ConstMatrixMap(t.data(), static_cast<Eigen::Index>(t.rows()),
                        static_cast<Eigen::Index>(t.cols()));
}
MatrixMap as_matrix(Tensor& t) {
  return MatrixMap(t.data(), static_cast<Eigen::Index>(t.rows()),
                   static_cast<Eigen::Index>(t.cols()));
}

bool is_suffix(const Shape& small, const Shape& big) {
  if (small.size() > big.size()) return false;
  return std::equal(small.rbegin(), small.rend(), big.rbegin());
}

Real sigmoid_value(Real x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  Real e = std::exp(x);
  return e / (1.0 + e);
}

Real sign(Real x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

void accumulate(std::vector<Tensor>& grads, int id, Tensor g) {
  Tensor& dst = grads[static_cast<std::size_t>(id)];
  if (dst.empty()) {
    dst = std::move(g);
    return;
  }
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += g[i];
}

// Sums a gradient of shape `full` down to the broadcast operand's shape.
Tensor reduce_broadcast(const Tensor& g, const Shape& target) {
  if (g.shape() == target) return g;
  Tensor out(target, 0.0);
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < g.size(); ++i) out[i % n] += g[i];
  return out;
}

std::size_t conv_out_len(std::size_t len, const Conv1dOptions& o, std::size_t k) {
  return (len + 2 * o.padding - k) / o.stride + 1;
}

}  // namespace

const char* op_name(Op op) {
  switch (op) {
    case Op::kPlaceholder: return "placeholder";
    case Op::kParameter: return "parameter";
    case Op::kConstant: return "constant";
    case Op::kMatMul: return "matmul";
    case Op::kMatMulNT: return "matmul_nt";
    case Op::kAdd: return "add";
    case Op::kSub: return "sub";
    case Op::kMul: return "mul";
    case Op::kScale: return "scale";
    case Op::kSigmoid: return "sigmoid";
    case Op::kSwish: return "swish";
    case Op::kRelu: return "relu";
    case Op::kTanh: return "tanh";
    case Op::kLog: return "log";
    case Op::kLayerNorm: return "layer_norm";
    case Op::kConv1d: return "conv1d";
    case Op::kSoftmax: return "softmax";
    case Op::kLogSoftmax: return "log_softmax";
    case Op::kMeanAbs: return "mean_abs";
    case Op::kMaskedMeanAbs: return "masked_mean_abs";
    case Op::kSum: return "sum";
    case Op::kSliceCols: return "slice_cols";
    case Op::kConcatCols: return "concat_cols";
    case Op::kSliceRows: return "slice_rows";
    case Op::kConcatRows: return "concat_rows";
    case Op::kInterleaveRows: return "interleave_rows";
    case Op::kRelPosBias: return "rel_pos_bias";
    case Op::kCustom: return "custom";
  }
  return "?";
}

Var Graph::push(Op op, std::vector<int> inputs, const std::string& name) {
  for (int i : inputs) {
    if (i < 0 || static_cast<std::size_t>(i) >= nodes_.size()) {
      fail(op_name(op), ": input node ", i, " does not precede its consumer");
    }
  }
  Node n;
  n.op = op;
  n.inputs = std::move(inputs);
  const int id = static_cast<int>(nodes_.size());
  n.name = name.empty() ? std::string(op_name(op)) + "#" + std::to_string(id) : name;
  nodes_.push_back(std::move(n));
  evaluated_ = false;
  return Var{id};
}

Var Graph::placeholder(const std::string& name) {
  if (by_name_.count(name)) fail("duplicate node name '", name, "'");
  Var v = push(Op::kPlaceholder, {}, name);
  by_name_[name] = v.id;
  return v;
}

Var Graph::parameter(const std::string& name, Tensor& value) {
  auto it = params_.find(name);
  if (it != params_.end()) {
    if (nodes_[static_cast<std::size_t>(it->second)].param != &value) {
      fail("parameter '", name, "' bound to two different tensors");
    }
    return Var{it->second};
  }
  if (by_name_.count(name)) fail("duplicate node name '", name, "'");
  Var v = push(Op::kParameter, {}, name);
  nodes_.back().param = &value;
  params_[name] = v.id;
  by_name_[name] = v.id;
  return v;
}

Var Graph::constant(Tensor value, const std::string& name) {
  Var v = push(Op::kConstant, {});
  nodes_.back().value = std::move(value);
  if (!name.empty()) this->name(v, name);
  return v;
}

Var Graph::matmul(Var a, Var b) { return push(Op::kMatMul, {a.id, b.id}); }
Var Graph::matmul_nt(Var a, Var b) { return push(Op::kMatMulNT, {a.id, b.id}); }
Var Graph::add(Var a, Var b) { return push(Op::kAdd, {a.id, b.id}); }
Var Graph::sub(Var a, Var b) { return push(Op::kSub, {a.id, b.id}); }
Var Graph::mul(Var a, Var b) { return push(Op::kMul, {a.id, b.id}); }
Var Graph::scale(Var a, Real factor) {
  Var v = push(Op::kScale, {a.id});
  nodes_.back().scalar = factor;
  return v;
}
Var Graph::sigmoid(Var a) { return push(Op::kSigmoid, {a.id}); }
Var Graph::swish(Var a) { return push(Op::kSwish, {a.id}); }
Var Graph::relu(Var a) { return push(Op::kRelu, {a.id}); }
Var Graph::tanh(Var a) { return push(Op::kTanh, {a.id}); }
Var Graph::log(Var a) { return push(Op::kLog, {a.id}); }
Var Graph::layer_norm(Var x, Var gain, Var bias) {
  return push(Op::kLayerNorm, {x.id, gain.id, bias.id});
}
Var Graph::conv1d(Var x, Var weight, Conv1dOptions options) {
  if (options.stride == 0) fail("conv1d stride must be positive");
  Var v = push(Op::kConv1d, {x.id, weight.id});
  nodes_.back().conv = options;
  return v;
}
Var Graph::softmax(Var a) { return push(Op::kSoftmax, {a.id}); }
Var Graph::log_softmax(Var a) { return push(Op::kLogSoftmax, {a.id}); }
Var Graph::mean_abs(Var a) { return push(Op::kMeanAbs, {a.id}); }
Var Graph::masked_mean_abs(Var pred, Var target, std::vector<Real> row_mask) {
  if (std::none_of(row_mask.begin(), row_mask.end(), [](Real m) { return m != 0.0; })) {
    fail("masked_mean_abs: empty mask");
  }
  Var v = push(Op::kMaskedMeanAbs, {pred.id, target.id});
  nodes_.back().mask = std::move(row_mask);
  return v;
}
Var Graph::sum(Var a) { return push(Op::kSum, {a.id}); }
Var Graph::slice_cols(Var a, std::size_t begin, std::size_t count) {
  if (count == 0) fail("slice_cols: empty slice");
  Var v = push(Op::kSliceCols, {a.id});
  nodes_.back().a = begin;
  nodes_.back().b = count;
  return v;
}
Var Graph::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) fail("concat_cols: no inputs");
  std::vector<int> ids;
  for (Var p : parts) ids.push_back(p.id);
  return push(Op::kConcatCols, std::move(ids));
}
Var Graph::slice_rows(Var a, std::size_t begin, std::size_t count) {
  if (count == 0) fail("slice_rows: empty slice");
  Var v = push(Op::kSliceRows, {a.id});
  nodes_.back().a = begin;
  nodes_.back().b = count;
  return v;
}
Var Graph::concat_rows(const std::vector<Var>& parts) {
  if (parts.empty()) fail("concat_rows: no inputs");
  std::vector<int> ids;
  for (Var p : parts) ids.push_back(p.id);
  return push(Op::kConcatRows, std::move(ids));
}
Var Graph::interleave_rows(const std::vector<Var>& parts) {
  if (parts.empty()) fail("interleave_rows: no inputs");
  std::vector<int> ids;
  for (Var p : parts) ids.push_back(p.id);
  return push(Op::kInterleaveRows, std::move(ids));
}
Var Graph::rel_pos_bias(Var table, std::size_t head, std::size_t len) {
  if (len == 0) fail("rel_pos_bias: zero length");
  Var v = push(Op::kRelPosBias, {table.id});
  nodes_.back().a = head;
  nodes_.back().b = len;
  return v;
}
Var Graph::custom(const std::vector<Var>& inputs, std::shared_ptr<const CustomOp> op,
                  const std::string& name) {
  if (!op || !op->forward || !op->backward) fail("custom op needs forward and backward");
  std::vector<int> ids;
  for (Var p : inputs) ids.push_back(p.id);
  Var v = push(Op::kCustom, std::move(ids));
  nodes_.back().custom = std::move(op);
  nodes_.back().name = name + "#" + std::to_string(v.id);
  return v;
}

Var Graph::name(Var v, const std::string& name) {
  Node& n = nodes_.at(static_cast<std::size_t>(v.id));
  if (n.op == Op::kParameter || n.op == Op::kPlaceholder) {
    fail("cannot rename ", op_name(n.op), " '", n.name, "'");
  }
  if (by_name_.count(name)) fail("duplicate node name '", name, "'");
  n.name = name;
  by_name_[name] = v.id;
  return v;
}

Var Graph::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) fail("no node named '", name, "'");
  return Var{it->second};
}

void Graph::freeze(const std::set<std::string>& param_names) {
  for (const auto& n : param_names) {
    if (!params_.count(n)) fail("freeze: unknown parameter '", n, "'");
  }
  frozen_.insert(param_names.begin(), param_names.end());
}

std::vector<std::string> Graph::parameter_names() const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) {
    if (n.op == Op::kParameter) out.push_back(n.name);
  }
  return out;
}

Tensor* Graph::parameter_tensor(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) fail("unknown parameter '", name, "'");
  return nodes_[static_cast<std::size_t>(it->second)].param;
}

const Tensor& Graph::in(const Node& n, std::size_t i) const {
  const Node& src = nodes_[static_cast<std::size_t>(n.inputs[i])];
  return src.op == Op::kParameter ? *src.param : src.value;
}

const Tensor& Graph::value(Var v) const {
  const Node& n = nodes_.at(static_cast<std::size_t>(v.id));
  if (n.op == Op::kParameter) return *n.param;
  if (!evaluated_ && n.op != Op::kConstant) fail("value of '", n.name, "' before forward");
  return n.value;
}

const Tensor& Graph::grad(Var v) const {
  if (grads_.empty()) fail("grad() before backward");
  return grads_.at(static_cast<std::size_t>(v.id));
}

std::map<std::string, Tensor> Graph::named_outputs() const {
  std::map<std::string, Tensor> out;
  for (const auto& [name, id] : by_name_) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.op == Op::kParameter || n.op == Op::kPlaceholder) continue;
    out.emplace(name, n.value);
  }
  return out;
}

std::string Graph::describe(int id) const {
  const Node& n = nodes_[static_cast<std::size_t>(id)];
  std::ostringstream os;
  os << "'" << n.name << "'";
  const Tensor& v = n.op == Op::kParameter ? *n.param : n.value;
  if (!v.empty()) os << ' ' << shape_string(v.shape());
  return os.str();
}

void Graph::forward(const Feeds& feeds) {
  if (&feeds != &feeds_) feeds_ = feeds;
  evaluated_ = false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) eval(static_cast<int>(i));
  evaluated_ = true;
  grads_.clear();
}

void Graph::eval(int id) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  auto mismatch = [&](const char* what) {
    std::ostringstream os;
    os << n.name << ": " << what << " between " << describe(n.inputs[0]);
    for (std::size_t i = 1; i < n.inputs.size(); ++i) os << " and " << describe(n.inputs[i]);
    throw Error(os.str());
  };

  switch (n.op) {
    case Op::kPlaceholder: {
      auto it = feeds_.find(n.name);
      if (it == feeds_.end()) fail("missing feed for placeholder '", n.name, "'");
      n.value = it->second;
      break;
    }
    case Op::kParameter:
    case Op::kConstant:
      break;
    case Op::kMatMul: {
      const Tensor& a = in(n, 0);
      const Tensor& b = in(n, 1);
      if (b.rank() != 2 || a.cols() != b.dim(0)) mismatch("shape mismatch");
      Shape s = a.shape();
      s.back() = b.dim(1);
      n.value = Tensor(s);
      as_matrix(n.value).noalias() = as_matrix(a) * as_matrix(b);
      break;
    }
    case Op::kMatMulNT: {
      const Tensor& a = in(n, 0);
      const Tensor& b = in(n, 1);
      if (a.cols() != b.cols()) mismatch("shape mismatch");
      n.value = Tensor({a.rows(), b.rows()});
      as_matrix(n.value).noalias() = as_matrix(a) * as_matrix(b).transpose();
      break;
    }
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul: {
      const Tensor& a = in(n, 0);
      const Tensor& b = in(n, 1);
      if (!is_suffix(b.shape(), a.shape())) mismatch("shape mismatch");
      n.value = Tensor(a.shape());
      const std::size_t nb = b.size();
      Real* out = n.value.data();
      if (n.op == Op::kAdd) {
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i % nb];
      } else if (n.op == Op::kSub) {
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i % nb];
      } else {
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i % nb];
      }
      break;
    }
    case Op::kScale: {
      const Tensor& a = in(n, 0);
      n.value = Tensor(a.shape());
      for (std::size_t i = 0; i < a.size(); ++i) n.value[i] = a[i] * n.scalar;
      break;
    }
    case Op::kSigmoid:
    case Op::kSwish:
    case Op::kRelu:
    case Op::kTanh:
    case Op::kLog: {
      const Tensor& a = in(n, 0);
      n.value = Tensor(a.shape());
      Real* out = n.value.data();
      for (std::size_t i = 0; i < a.size(); ++i) {
        const Real x = a[i];
        switch (n.op) {
          case Op::kSigmoid: out[i] = sigmoid_value(x); break;
          case Op::kSwish: out[i] = x * sigmoid_value(x); break;
          case Op::kRelu: out[i] = x > 0 ? x : 0.0; break;
          case Op::kTanh: out[i] = std::tanh(x); break;
          default: out[i] = std::log(x); break;
        }
      }
      break;
    }
    case Op::kLayerNorm: {
      const Tensor& x = in(n, 0);
      const Tensor& g = in(n, 1);
      const Tensor& b = in(n, 2);
      const std::size_t cols = x.cols();
      if (g.size() != cols || b.size() != cols) mismatch("shape mismatch");
      n.value = Tensor(x.shape());
      n.aux = Tensor(x.shape());
      n.cache.assign(x.rows(), 0.0);
      for (std::size_t r = 0; r < x.rows(); ++r) {
        auto row = x.row(r);
        Real mean = 0;
        for (Real v : row) mean += v;
        mean /= static_cast<Real>(cols);
        Real var = 0;
        for (Real v : row) var += (v - mean) * (v - mean);
        var /= static_cast<Real>(cols);
        const Real inv = 1.0 / std::sqrt(var + kLayerNormEpsilon);
        n.cache[r] = inv;
        for (std::size_t c = 0; c < cols; ++c) {
          const Real xh = (row[c] - mean) * inv;
          n.aux.at(r, c) = xh;
          n.value.at(r, c) = xh * g[c] + b[c];
        }
      }
      break;
    }
    case Op::kConv1d: {
      const Tensor& x = in(n, 0);
      const Tensor& w = in(n, 1);
      const Conv1dOptions& o = n.conv;
      const std::size_t len = x.rows();
      const std::size_t cin = x.cols();
      const std::size_t k = w.dim(0);
      if (o.depthwise) {
        if (w.rank() != 2 || w.dim(1) != cin) mismatch("depthwise kernel shape mismatch");
      } else {
        if (w.rank() != 3 || w.dim(1) != cin) mismatch("kernel shape mismatch");
      }
      if (len + 2 * o.padding < k) mismatch("input shorter than kernel");
      const std::size_t out_len = conv_out_len(len, o, k);
      const std::size_t cout = o.depthwise ? cin : w.dim(2);
      n.value = Tensor({out_len, cout}, 0.0);
      if (o.depthwise) {
        for (std::size_t t = 0; t < out_len; ++t) {
          for (std::size_t j = 0; j < k; ++j) {
            const long src = static_cast<long>(t * o.stride + j) - static_cast<long>(o.padding);
            if (src < 0 || src >= static_cast<long>(len)) continue;
            const Real* xr = x.data() + static_cast<std::size_t>(src) * cin;
            const Real* wr = w.data() + j * cin;
            Real* yr = n.value.data() + t * cout;
            for (std::size_t c = 0; c < cin; ++c) yr[c] += xr[c] * wr[c];
          }
        }
      } else {
        Matrix gathered(static_cast<Eigen::Index>(out_len), static_cast<Eigen::Index>(cin));
        auto y = as_matrix(n.value);
        for (std::size_t j = 0; j < k; ++j) {
          gathered.setZero();
          for (std::size_t t = 0; t < out_len; ++t) {
            const long src = static_cast<long>(t * o.stride + j) - static_cast<long>(o.padding);
            if (src < 0 || src >= static_cast<long>(len)) continue;
            std::copy_n(x.data() + static_cast<std::size_t>(src) * cin, cin,
                        gathered.data() + t * cin);
          }
          ConstMatrixMap wk(w.data() + j * cin * cout, static_cast<Eigen::Index>(cin),
                            static_cast<Eigen::Index>(cout));
          y.noalias() += gathered * wk;
        }
      }
      break;
    }
    case Op::kSoftmax:
    case Op::kLogSoftmax: {
      const Tensor& a = in(n, 0);
      n.value = Tensor(a.shape());
      for (std::size_t r = 0; r < a.rows(); ++r) {
        auto row = a.row(r);
        auto out = n.value.row(r);
        const Real mx = *std::max_element(row.begin(), row.end());
        Real total = 0;
        for (std::size_t c = 0; c < row.size(); ++c) total += std::exp(row[c] - mx);
        if (n.op == Op::kSoftmax) {
          for (std::size_t c = 0; c < row.size(); ++c) out[c] = std::exp(row[c] - mx) / total;
        } else {
          const Real lse = mx + std::log(total);
          for (std::size_t c = 0; c < row.size(); ++c) out[c] = row[c] - lse;
        }
      }
      break;
    }
    case Op::kMeanAbs: {
      const Tensor& a = in(n, 0);
      CompensatedSum s;
      for (Real v : a.values()) s.add(std::abs(v));
      n.value = Tensor::scalar(s.value() / static_cast<Real>(a.size()));
      break;
    }
    case Op::kMaskedMeanAbs: {
      const Tensor& p = in(n, 0);
      const Tensor& t = in(n, 1);
      if (p.shape() != t.shape()) mismatch("shape mismatch");
      if (n.mask.size() != p.rows()) {
        fail(n.name, ": mask has ", n.mask.size(), " rows but ", describe(n.inputs[0]),
             " has ", p.rows());
      }
      CompensatedSum s;
      std::size_t count = 0;
      for (std::size_t r = 0; r < p.rows(); ++r) {
        if (n.mask[r] == 0.0) continue;
        ++count;
        for (std::size_t c = 0; c < p.cols(); ++c) s.add(std::abs(p.at(r, c) - t.at(r, c)));
      }
      n.scalar = static_cast<Real>(count * p.cols());
      n.value = Tensor::scalar(s.value() / n.scalar);
      break;
    }
    case Op::kSum: {
      const Tensor& a = in(n, 0);
      CompensatedSum s;
      for (Real v : a.values()) s.add(v);
      n.value = Tensor::scalar(s.value());
      break;
    }
    case Op::kSliceCols: {
      const Tensor& a = in(n, 0);
      if (n.a + n.b > a.cols()) mismatch("column slice out of range");
      Shape s = a.shape();
      s.back() = n.b;
      n.value = Tensor(s);
      for (std::size_t r = 0; r < a.rows(); ++r) {
        std::copy_n(a.data() + r * a.cols() + n.a, n.b, n.value.data() + r * n.b);
      }
      break;
    }
    case Op::kConcatCols: {
      std::size_t rows = in(n, 0).rows();
      std::size_t cols = 0;
      for (std::size_t i = 0; i < n.inputs.size(); ++i) {
        if (in(n, i).rows() != rows) mismatch("row count mismatch");
        cols += in(n, i).cols();
      }
      n.value = Tensor({rows, cols});
      std::size_t off = 0;
      for (std::size_t i = 0; i < n.inputs.size(); ++i) {
        const Tensor& p = in(n, i);
        for (std::size_t r = 0; r < rows; ++r) {
          std::copy_n(p.data() + r * p.cols(), p.cols(), n.value.data() + r * cols + off);
        }
        off += p.cols();
      }
      break;
    }
    case Op::kSliceRows: {
      const Tensor& a = in(n, 0);
      if (n.a + n.b > a.rows()) mismatch("row slice out of range");
      n.value = Tensor({n.b, a.cols()});
      std::copy_n(a.data() + n.a * a.cols(), n.b * a.cols(), n.value.data());
      break;
    }
    case Op::kConcatRows: {
      const std::size_t cols = in(n, 0).cols();
      std::size_t rows = 0;
      for (std::size_t i = 0; i < n.inputs.size(); ++i) {
        if (in(n, i).cols() != cols) mismatch("column count mismatch");
        rows += in(n, i).rows();
      }
      n.value = Tensor({rows, cols});
      Real* out = n.value.data();
      for (std::size_t i = 0; i < n.inputs.size(); ++i) {
        const Tensor& p = in(n, i);
        out = std::copy_n(p.data(), p.size(), out);
      }
      break;
    }
    case Op::kInterleaveRows: {
      const std::size_t k = n.inputs.size();
      const Tensor& first = in(n, 0);
      for (std::size_t i = 1; i < k; ++i) {
        if (in(n, i).rows() != first.rows() || in(n, i).cols() != first.cols()) {
          mismatch("shape mismatch");
        }
      }
      const std::size_t rows = first.rows();
      const std::size_t cols = first.cols();
      n.value = Tensor({k * rows, cols});
      for (std::size_t j = 0; j < k; ++j) {
        const Tensor& p = in(n, j);
        for (std::size_t r = 0; r < rows; ++r) {
          std::copy_n(p.data() + r * cols, cols, n.value.data() + (k * r + j) * cols);
        }
      }
      break;
    }
    case Op::kRelPosBias: {
      const Tensor& table = in(n, 0);
      if (table.rank() != 2 || table.cols() % 2 == 0 || n.a >= table.rows()) {
        mismatch("relative-position table shape mismatch");
      }
      const long clip = static_cast<long>(table.cols() / 2);
      const std::size_t len = n.b;
      n.value = Tensor({len, len});
      const Real* row = table.data() + n.a * table.cols();
      for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t j = 0; j < len; ++j) {
          long d = static_cast<long>(j) - static_cast<long>(i);
          d = std::clamp(d, -clip, clip);
          n.value.at(i, j) = row[d + clip];
        }
      }
      break;
    }
    case Op::kCustom: {
      std::vector<const Tensor*> ins;
      for (std::size_t i = 0; i < n.inputs.size(); ++i) ins.push_back(&in(n, i));
      n.value = n.custom->forward(ins);
      break;
    }
  }

  if (n.op != Op::kParameter && n.op != Op::kPlaceholder && !n.value.all_finite()) {
    fail("non-finite value produced by ", op_name(n.op), " node '", n.name, "'");
  }
}

GradMap Graph::backward(Var loss) {
  if (!evaluated_) fail("backward before forward");
  const Tensor& lv = value(loss);
  if (lv.size() != 1) fail("backward: loss '", node_name(loss), "' is not scalar");

  std::vector<char> needs(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.op == Op::kParameter) {
      needs[i] = frozen_.count(n.name) ? 0 : 1;
    } else {
      for (int j : n.inputs) needs[i] |= needs[static_cast<std::size_t>(j)];
    }
  }

  grads_.assign(nodes_.size(), Tensor());
  grads_[static_cast<std::size_t>(loss.id)] = Tensor(lv.shape(), 1.0);
  for (int id = loss.id; id >= 0; --id) {
    const auto i = static_cast<std::size_t>(id);
    if (!needs[i] || grads_[i].empty()) continue;
    const Op op = nodes_[i].op;
    if (op == Op::kParameter || op == Op::kPlaceholder || op == Op::kConstant) continue;
    backprop(id, grads_, needs);
  }

  GradMap out;
  for (const auto& n : nodes_) {
    if (n.op != Op::kParameter || frozen_.count(n.name)) continue;
    const Tensor& g = grads_[static_cast<std::size_t>(params_.at(n.name))];
    out.emplace(n.name, g.empty() ? Tensor(n.param->shape(), 0.0) : g);
  }
  return out;
}

void Graph::backprop(int id, std::vector<Tensor>& grads, const std::vector<char>& needs) const {
  const Node& n = nodes_[static_cast<std::size_t>(id)];
  const Tensor& g = grads[static_cast<std::size_t>(id)];
  auto want = [&](std::size_t i) { return needs[static_cast<std::size_t>(n.inputs[i])] != 0; };
  auto give = [&](std::size_t i, Tensor t) { accumulate(grads, n.inputs[i], std::move(t)); };

  switch (n.op) {
    case Op::kPlaceholder:
    case Op::kParameter:
    case Op::kConstant:
      break;
    case Op::kMatMul: {
      const Tensor& a = in(n, 0);
      const Tensor& b = in(n, 1);
      if (want(0)) {
        Tensor ga(a.shape());
        as_matrix(ga).noalias() = as_matrix(g) * as_matrix(b).transpose();
        give(0, std::move(ga));
      }
      if (want(1)) {
        Tensor gb(b.shape());
        as_matrix(gb).noalias() = as_matrix(a).transpose() * as_matrix(g);
        give(1, std::move(gb));
      }
      break;
    }
    case Op::kMatMulNT: {
      const Tensor& a = in(n, 0);
      const Tensor& b = in(n, 1);
      if (want(0)) {
        Tensor ga(a.shape());
        as_matrix(ga).noalias() = as_matrix(g) * as_matrix(b);
        give(0, std::move(ga));
      }
      if (want(1)) {
        Tensor gb(b.shape());
        as_matrix(gb).noalias() = as_matrix(g).transpose() * as_matrix(a);
        give(1, std::move(gb));
      }
      break;
    }
    case Op::kAdd:
    case Op::kSub: {
      const Tensor& b = in(n, 1);
      if (want(0)) give(0, g);
      if (want(1)) {
        Tensor gb = reduce_broadcast(g, b.shape());
        if (n.op == Op::kSub) {
          for (auto& v : gb.values()) v = -v;
        }
        give(1, std::move(gb));
      }
      break;
    }
    case Op::kMul: {
      const Tensor& a = in(n, 0);
      const Tensor& b = in(n, 1);
      const std::size_t nb = b.size();
      if (want(0)) {
        Tensor ga(a.shape());
        for (std::size_t i = 0; i < a.size(); ++i) ga[i] = g[i] * b[i % nb];
        give(0, std::move(ga));
      }
      if (want(1)) {
        Tensor gb(b.shape(), 0.0);
        for (std::size_t i = 0; i < a.size(); ++i) gb[i % nb] += g[i] * a[i];
        give(1, std::move(gb));
      }
      break;
    }
    case Op::kScale: {
      Tensor ga(g.shape());
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] = g[i] * n.scalar;
      give(0, std::move(ga));
      break;
    }
    case Op::kSigmoid:
    case Op::kSwish:
    case Op::kRelu:
    case Op::kTanh:
    case Op::kLog: {
      const Tensor& x = in(n, 0);
      const Tensor& y = n.value;
      Tensor ga(x.shape());
      for (std::size_t i = 0; i < x.size(); ++i) {
        Real d;
        switch (n.op) {
          case Op::kSigmoid: d = y[i] * (1.0 - y[i]); break;
          case Op::kSwish: {
            const Real s = sigmoid_value(x[i]);
            d = s * (1.0 + x[i] * (1.0 - s));
            break;
          }
          case Op::kRelu: d = x[i] > 0 ? 1.0 : 0.0; break;
          case Op::kTanh: d = 1.0 - y[i] * y[i]; break;
          default: d = 1.0 / x[i]; break;
        }
        ga[i] = g[i] * d;
      }
      give(0, std::move(ga));
      break;
    }
    case Op::kLayerNorm: {
      const Tensor& x = in(n, 0);
      const Tensor& gain = in(n, 1);
      const std::size_t cols = x.cols();
      const Tensor& xhat = n.aux;
      if (want(0)) {
        Tensor gx(x.shape());
        std::vector<Real> dxh(cols);
        for (std::size_t r = 0; r < x.rows(); ++r) {
          Real mean_d = 0, mean_dx = 0;
          for (std::size_t c = 0; c < cols; ++c) {
            dxh[c] = g.at(r, c) * gain[c];
            mean_d += dxh[c];
            mean_dx += dxh[c] * xhat.at(r, c);
          }
          mean_d /= static_cast<Real>(cols);
          mean_dx /= static_cast<Real>(cols);
          for (std::size_t c = 0; c < cols; ++c) {
            gx.at(r, c) = n.cache[r] * (dxh[c] - mean_d - xhat.at(r, c) * mean_dx);
          }
        }
        give(0, std::move(gx));
      }
      if (want(1)) {
        Tensor gg(gain.shape(), 0.0);
        for (std::size_t r = 0; r < x.rows(); ++r) {
          for (std::size_t c = 0; c < cols; ++c) gg[c] += g.at(r, c) * xhat.at(r, c);
        }
        give(1, std::move(gg));
      }
      if (want(2)) {
        Tensor gb(in(n, 2).shape(), 0.0);
        for (std::size_t r = 0; r < x.rows(); ++r) {
          for (std::size_t c = 0; c < cols; ++c) gb[c] += g.at(r, c);
        }
        give(2, std::move(gb));
      }
      break;
    }
    case Op::kConv1d: {
      const Tensor& x = in(n, 0);
      const Tensor& w = in(n, 1);
      const Conv1dOptions& o = n.conv;
      const std::size_t len = x.rows();
      const std::size_t cin = x.cols();
      const std::size_t k = w.dim(0);
      const std::size_t out_len = g.rows();
      const std::size_t cout = g.cols();
      Tensor gx;
      Tensor gw;
      if (want(0)) gx = Tensor(x.shape(), 0.0);
      if (want(1)) gw = Tensor(w.shape(), 0.0);
      if (o.depthwise) {
        for (std::size_t t = 0; t < out_len; ++t) {
          const Real* gr = g.data() + t * cout;
          for (std::size_t j = 0; j < k; ++j) {
            const long src = static_cast<long>(t * o.stride + j) - static_cast<long>(o.padding);
            if (src < 0 || src >= static_cast<long>(len)) continue;
            const auto s = static_cast<std::size_t>(src);
            if (!gx.empty()) {
              for (std::size_t c = 0; c < cin; ++c) gx.at(s, c) += gr[c] * w.at(j, c);
            }
            if (!gw.empty()) {
              for (std::size_t c = 0; c < cin; ++c) gw.at(j, c) += gr[c] * x.at(s, c);
            }
          }
        }
      } else {
        Matrix gathered(static_cast<Eigen::Index>(out_len), static_cast<Eigen::Index>(cin));
        Matrix dgathered;
        auto gm = as_matrix(g);
        for (std::size_t j = 0; j < k; ++j) {
          ConstMatrixMap wk(w.data() + j * cin * cout, static_cast<Eigen::Index>(cin),
                            static_cast<Eigen::Index>(cout));
          if (!gw.empty()) {
            gathered.setZero();
            for (std::size_t t = 0; t < out_len; ++t) {
              const long src =
                  static_cast<long>(t * o.stride + j) - static_cast<long>(o.padding);
              if (src < 0 || src >= static_cast<long>(len)) continue;
              std::copy_n(x.data() + static_cast<std::size_t>(src) * cin, cin,
                          gathered.data() + t * cin);
            }
            MatrixMap gwk(gw.data() + j * cin * cout, static_cast<Eigen::Index>(cin),
                          static_cast<Eigen::Index>(cout));
            gwk.noalias() += gathered.transpose() * gm;
          }
          if (!gx.empty()) {
            dgathered.noalias() = gm * wk.transpose();
            for (std::size_t t = 0; t < out_len; ++t) {
              const long src =
                  static_cast<long>(t * o.stride + j) - static_cast<long>(o.padding);
              if (src < 0 || src >= static_cast<long>(len)) continue;
              Real* dst = gx.data() + static_cast<std::size_t>(src) * cin;
              const Real* srow = dgathered.data() + t * cin;
              for (std::size_t c = 0; c < cin; ++c) dst[c] += srow[c];
            }
          }
        }
      }
      if (!gx.empty()) give(0, std::move(gx));
      if (!gw.empty()) give(1, std::move(gw));
      break;
    }
    case Op::kSoftmax: {
      const Tensor& y = n.value;
      Tensor ga(y.shape());
      for (std::size_t r = 0; r < y.rows(); ++r) {
        Real dot = 0;
        for (std::size_t c = 0; c < y.cols(); ++c) dot += g.at(r, c) * y.at(r, c);
        for (std::size_t c = 0; c < y.cols(); ++c) ga.at(r, c) = y.at(r, c) * (g.at(r, c) - dot);
      }
      give(0, std::move(ga));
      break;
    }
    case Op::kLogSoftmax: {
      const Tensor& y = n.value;
      Tensor ga(y.shape());
      for (std::size_t r = 0; r < y.rows(); ++r) {
        Real total = 0;
        for (std::size_t c = 0; c < y.cols(); ++c) total += g.at(r, c);
        for (std::size_t c = 0; c < y.cols(); ++c) {
          ga.at(r, c) = g.at(r, c) - std::exp(y.at(r, c)) * total;
        }
      }
      give(0, std::move(ga));
      break;
    }
    case Op::kMeanAbs: {
      const Tensor& a = in(n, 0);
      const Real scale = g[0] / static_cast<Real>(a.size());
      Tensor ga(a.shape());
      for (std::size_t i = 0; i < a.size(); ++i) ga[i] = sign(a[i]) * scale;
      give(0, std::move(ga));
      break;
    }
    case Op::kMaskedMeanAbs: {
      const Tensor& p = in(n, 0);
      const Tensor& t = in(n, 1);
      const Real scale = g[0] / n.scalar;
      Tensor gp(p.shape(), 0.0);
      for (std::size_t r = 0; r < p.rows(); ++r) {
        if (n.mask[r] == 0.0) continue;
        for (std::size_t c = 0; c < p.cols(); ++c) {
          gp.at(r, c) = sign(p.at(r, c) - t.at(r, c)) * scale;
        }
      }
      if (want(1)) {
        Tensor gt(gp.shape());
        for (std::size_t i = 0; i < gp.size(); ++i) gt[i] = -gp[i];
        give(1, std::move(gt));
      }
      if (want(0)) give(0, std::move(gp));
      break;
    }
    case Op::kSum: {
      give(0, Tensor(in(n, 0).shape(), g[0]));
      break;
    }
    case Op::kSliceCols: {
      const Tensor& a = in(n, 0);
      Tensor ga(a.shape(), 0.0);
      for (std::size_t r = 0; r < a.rows(); ++r) {
        std::copy_n(g.data() + r * n.b, n.b, ga.data() + r * a.cols() + n.a);
      }
      give(0, std::move(ga));
      break;
    }
    case Op::kConcatCols: {
      std::size_t off = 0;
      const std::size_t cols = g.cols();
      for (std::size_t i = 0; i < n.inputs.size(); ++i) {
        const Tensor& p = in(n, i);
        if (want(i)) {
          Tensor gp(p.shape());
          for (std::size_t r = 0; r < p.rows(); ++r) {
            std::copy_n(g.data() + r * cols + off, p.cols(), gp.data() + r * p.cols());
          }
          give(i, std::move(gp));
        }
        off += p.cols();
      }
      break;
    }
    case Op::kSliceRows: {
      const Tensor& a = in(n, 0);
      Tensor ga(a.shape(), 0.0);
      std::copy_n(g.data(), g.size(), ga.data() + n.a * a.cols());
      give(0, std::move(ga));
      break;
    }
    case Op::kConcatRows: {
      const Real* src = g.data();
      for (std::size_t i = 0; i < n.inputs.size(); ++i) {
        const Tensor& p = in(n, i);
        if (want(i)) {
          Tensor gp(p.shape());
          std::copy_n(src, p.size(), gp.data());
          give(i, std::move(gp));
        }
        src += p.size();
      }
      break;
    }
    case Op::kInterleaveRows: {
      const std::size_t k = n.inputs.size();
      for (std::size_t j = 0; j < k; ++j) {
        if (!want(j)) continue;
        const Tensor& p = in(n, j);
        Tensor gp(p.shape());
        const std::size_t cols = p.cols();
        for (std::size_t r = 0; r < p.rows(); ++r) {
          std::copy_n(g.data() + (k * r + j) * cols, cols, gp.data() + r * cols);
        }
        give(j, std::move(gp));
      }
      break;
    }
    case Op::kRelPosBias: {
      const Tensor& table = in(n, 0);
      const long clip = static_cast<long>(table.cols() / 2);
      Tensor gt(table.shape(), 0.0);
      Real* row = gt.data() + n.a * table.cols();
      for (std::size_t i = 0; i < n.b; ++i) {
        for (std::size_t j = 0; j < n.b; ++j) {
          long d = std::clamp(static_cast<long>(j) - static_cast<long>(i), -clip, clip);
          row[d + clip] += g.at(i, j);
        }
      }
      give(0, std::move(gt));
      break;
    }
    case Op::kCustom: {
      std::vector<const Tensor*> ins;
      for (std::size_t i = 0; i < n.inputs.size(); ++i) ins.push_back(&in(n, i));
      std::vector<Tensor> gs = n.custom->backward(ins, n.value, g);
      if (gs.size() != n.inputs.size()) {
        fail(n.name, ": custom backward returned ", gs.size(), " gradients for ",
             n.inputs.size(), " inputs");
      }
      for (std::size_t i = 0; i < gs.size(); ++i) {
        if (!want(i) || gs[i].empty()) continue;
        if (gs[i].shape() != ins[i]->shape()) {
          fail(n.name, ": custom gradient shape ", shape_string(gs[i].shape()),
               " does not match input ", describe(n.inputs[i]));
        }
        give(i, std::move(gs[i]));
      }
      break;
    }
  }
}

std::map<std::string, Tensor> forward_eval(Graph& graph, const Feeds& feeds) {
  graph.forward(feeds);
  return graph.named_outputs();
}

}  // namespace cleancoder::numgrad
