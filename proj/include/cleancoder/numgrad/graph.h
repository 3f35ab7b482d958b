// include/cleancoder/numgrad/graph.h

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

#ifndef CLEANCODER_NUMGRAD_GRAPH_H_
#define CLEANCODER_NUMGRAD_GRAPH_H_

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "cleancoder/numgrad/param_store.h"
#include "cleancoder/numgrad/tensor.h"

namespace cleancoder::numgrad {

using Feeds = std::map<std::string, Tensor>;

// Handle to a node of a Graph.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

enum class Op {
  kPlaceholder,
  kParameter,
  kConstant,
  kMatMul,
  kMatMulNT,
  kAdd,
  kSub,
  kMul,
  kScale,
  kSigmoid,
  kSwish,
  kRelu,
  kTanh,
  kLog,
  kLayerNorm,
  kConv1d,
  kSoftmax,
  kLogSoftmax,
  kMeanAbs,
  kMaskedMeanAbs,
  kSum,
  kSliceCols,
  kConcatCols,
  kSliceRows,
  kConcatRows,
  kInterleaveRows,
  kRelPosBias,
  kCustom,
};

const char* op_name(Op op);

struct Conv1dOptions {
  std::size_t stride = 1;
  std::size_t padding = 0;
  bool depthwise = false;
};

// User-defined differentiable op. `backward` returns one gradient per input
// (an empty Tensor means "no gradient").
struct CustomOp {
  std::function<Tensor(const std::vector<const Tensor*>&)> forward;
  std::function<std::vector<Tensor>(const std::vector<const Tensor*>& inputs,
                                    const Tensor& output, const Tensor& grad_output)>
      backward;
};

inline constexpr Real kLayerNormEpsilon = 1e-5;

// Define-then-run computation graph over row-major tensors. Nodes are appended
// in topological order; forward() evaluates them in insertion order and
// backward() accumulates reverse-mode gradients for every non-frozen parameter.
//
// Tensors are treated as matrices: the last axis is the column axis and all
// leading axes are flattened into rows. A Graph is single-writer.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var placeholder(const std::string& name);
  // Parameters are looked up by name; registering the same name twice returns
  // the existing node. `value` must outlive the graph.
  Var parameter(const std::string& name, Tensor& value);
  Var parameter(ParamStore& store, const std::string& name) {
    return parameter(name, store.get(name));
  }
  Var constant(Tensor value, const std::string& name = "");

  // a: (..., k), b: (k, m) -> (..., m)
  Var matmul(Var a, Var b);
  // a: (n, k), b: (m, k) -> (n, m) = a * b^T
  Var matmul_nt(Var a, Var b);
  // Elementwise; b may broadcast over leading axes of a (b.shape is a suffix
  // of a.shape).
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var scale(Var a, Real factor);
  Var sigmoid(Var a);
  Var swish(Var a);
  Var relu(Var a);
  Var tanh(Var a);
  Var log(Var a);
  // Normalizes each row; gain/bias have shape (cols).
  Var layer_norm(Var x, Var gain, Var bias);
  // x: (T, C_in). Dense weight (K, C_in, C_out); depthwise weight (K, C).
  // Output length floor((T + 2*padding - K) / stride) + 1.
  Var conv1d(Var x, Var weight, Conv1dOptions options);
  Var softmax(Var a);
  Var log_softmax(Var a);
  Var mean_abs(Var a);
  // Mean of |pred - target| over the rows whose mask entry is nonzero.
  Var masked_mean_abs(Var pred, Var target, std::vector<Real> row_mask);
  Var sum(Var a);
  Var slice_cols(Var a, std::size_t begin, std::size_t count);
  Var concat_cols(const std::vector<Var>& parts);
  Var slice_rows(Var a, std::size_t begin, std::size_t count);
  Var concat_rows(const std::vector<Var>& parts);
  // parts: k tensors of shape (n, F) -> (k*n, F) with row k*i + j = parts[j][i].
  Var interleave_rows(const std::vector<Var>& parts);
  // table: (H, 2*clip+1) -> (len, len) with out(i, j) = table(head, clamp(j-i) + clip).
  Var rel_pos_bias(Var table, std::size_t head, std::size_t len);
  Var custom(const std::vector<Var>& inputs, std::shared_ptr<const CustomOp> op,
             const std::string& name = "custom");

  // Gives a node a unique user-visible name (returned by forward_eval).
  Var name(Var v, const std::string& name);
  Var find(const std::string& name) const;

  // Excludes parameters from differentiation. Unknown names fail.
  void freeze(const std::set<std::string>& param_names);
  bool is_frozen(const std::string& param_name) const { return frozen_.count(param_name) > 0; }

  void forward(const Feeds& feeds = {});
  // Gradients of the scalar `loss` w.r.t. every non-frozen parameter.
  GradMap backward(Var loss);

  bool evaluated() const { return evaluated_; }
  const Tensor& value(Var v) const;
  // Gradient of the last backward() w.r.t. any node (empty if none flowed).
  const Tensor& grad(Var v) const;
  std::size_t num_nodes() const { return nodes_.size(); }
  Op op(Var v) const { return nodes_.at(v.id).op; }
  const std::string& node_name(Var v) const { return nodes_.at(v.id).name; }
  std::vector<std::string> parameter_names() const;
  // Pointer to the tensor backing a parameter node.
  Tensor* parameter_tensor(const std::string& name) const;
  std::map<std::string, Tensor> named_outputs() const;
  const Feeds& last_feeds() const { return feeds_; }

 private:
  struct Node {
    Op op;
    std::vector<int> inputs;
    std::string name;
    Tensor value;
    Tensor* param = nullptr;
    Real scalar = 0.0;
    std::size_t a = 0, b = 0, c = 0;
    Conv1dOptions conv;
    std::vector<Real> mask;
    std::vector<Real> cache;
    std::shared_ptr<const CustomOp> custom;
    Tensor aux;
  };

  Var push(Op op, std::vector<int> inputs, const std::string& name = "");
  const Tensor& in(const Node& n, std::size_t i) const;
  std::string describe(int id) const;
  void eval(int id);
  void backprop(int id, std::vector<Tensor>& grads, const std::vector<char>& needs) const;

  std::vector<Node> nodes_;
  std::unordered_map<std::string, int> by_name_;
  std::unordered_map<std::string, int> params_;
  std::set<std::string> frozen_;
  std::vector<Tensor> grads_;
  Feeds feeds_;
  bool evaluated_ = false;
};

// Evaluates the graph and returns every explicitly named node's value.
std::map<std::string, Tensor> forward_eval(Graph& graph, const Feeds& feeds);

}  // namespace cleancoder::numgrad

#endif  // CLEANCODER_NUMGRAD_GRAPH_H_
