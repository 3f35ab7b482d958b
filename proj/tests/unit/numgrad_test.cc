// tests/unit/numgrad_test.cc

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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "cleancoder/numgrad/gradcheck.h"
#include "cleancoder/numgrad/graph.h"
#include "cleancoder/numgrad/rng.h"

using namespace cleancoder;
using namespace cleancoder::numgrad;

namespace {

Tensor random_tensor(Shape shape, Rng& rng, Real lo = -1.0, Real hi = 1.0) {
  Tensor t(std::move(shape));
  for (auto& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

// L = sum(y * r) for a fixed random r, so every output entry carries a
// distinct weight into the scalar.
Var weighted_sum(Graph& g, Var y, const Shape& shape, Rng& rng) {
  return g.sum(g.mul(y, g.constant(random_tensor(shape, rng))));
}

}  // namespace

TEST(Rng, SplitMix64Seed42) {
  // Reference values from a direct evaluation of the SplitMix64 recurrence.
  Rng rng(42);
  EXPECT_EQ(rng.next(), 0xbdd732262feb6e95ULL);
  EXPECT_EQ(rng.next(), 0x28efe333b266f103ULL);
  EXPECT_EQ(rng.next(), 0x47526757130f9f52ULL);
}

TEST(Rng, UniformAndNormalRanges) {
  Rng rng(7);
  double mean = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    double z = rng.normal();
    mean += z;
    sq += z * z;
  }
  EXPECT_NEAR(mean / n, 0.0, 0.05);
  EXPECT_NEAR(sq / n, 1.0, 0.05);
}

TEST(Graph, ForwardExamples) {
  Graph g;
  Var a = g.constant(Tensor::matrix({{1, 0}, {0, 1}}));
  Var b = g.constant(Tensor::matrix({{3}, {4}}));
  g.name(g.matmul(a, b), "prod");
  g.name(g.sigmoid(g.constant(Tensor({2, 3}, 0.0))), "sig");
  g.name(g.mean_abs(g.constant(Tensor::matrix({{1, -1}, {2, -2}}))), "l1");
  auto out = forward_eval(g, {});
  EXPECT_EQ(out.at("prod"), Tensor::matrix({{3}, {4}}));
  for (Real v : out.at("sig").values()) EXPECT_EQ(v, 0.5);
  EXPECT_DOUBLE_EQ(out.at("l1").item(), 1.5);
}

TEST(Graph, PlaceholderFeeds) {
  Graph g;
  Var x = g.placeholder("x");
  g.name(g.scale(x, 2.0), "y");
  auto out = forward_eval(g, {{"x", Tensor::matrix({{1, 2}})}});
  EXPECT_EQ(out.at("y"), Tensor::matrix({{2, 4}}));
  Graph missing;
  missing.placeholder("x");
  EXPECT_THROW(missing.forward({}), Error);
}

TEST(Graph, BackwardExamples) {
  Tensor w = Tensor::scalar(3.0);
  Graph g;
  Var loss = g.mean_abs(g.parameter("w", w));
  g.forward();
  EXPECT_DOUBLE_EQ(g.backward(loss).at("w")[0], 1.0);

  Tensor w0 = Tensor::scalar(0.0);
  Graph g2;
  Var l2 = g2.sum(g2.sigmoid(g2.parameter("w", w0)));
  g2.forward();
  EXPECT_DOUBLE_EQ(g2.backward(l2).at("w")[0], 0.25);
}

TEST(Graph, BackwardErrors) {
  Tensor w({2, 2}, 1.0);
  Graph g;
  Var p = g.parameter("w", w);
  Var y = g.scale(p, 2.0);
  Var loss = g.sum(y);
  EXPECT_THROW(g.backward(loss), Error);  // before forward
  g.forward();
  EXPECT_THROW(g.backward(y), Error);  // not scalar
  EXPECT_THROW(g.freeze({"nope"}), Error);
}

TEST(Graph, ShapeMismatchNamesBothNodes) {
  Graph g;
  Var a = g.constant(Tensor({2, 3}, 1.0), "left");
  Var b = g.constant(Tensor({4, 5}, 1.0), "right");
  g.matmul(a, b);
  try {
    g.forward();
    FAIL() << "expected shape failure";
  } catch (const Error& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("left"), std::string::npos) << msg;
    EXPECT_NE(msg.find("right"), std::string::npos) << msg;
  }
}

TEST(Graph, NonFiniteNamesOp) {
  Graph g;
  g.log(g.constant(Tensor::matrix({{-1.0}})));
  try {
    g.forward();
    FAIL() << "expected non-finite failure";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("log"), std::string::npos) << e.what();
  }
}

TEST(Graph, BroadcastAddMatchesTiling) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t rows = 1 + rng.below(5), cols = 1 + rng.below(5);
    Tensor a = random_tensor({rows, cols}, rng);
    Tensor b = random_tensor({cols}, rng);
    Tensor tiled({rows, cols});
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) tiled.at(r, c) = b[c];
    }
    Graph g;
    Var ca = g.constant(a);
    Var x = g.add(ca, g.constant(b));
    Var y = g.add(ca, g.constant(tiled));
    g.forward();
    EXPECT_EQ(g.value(x), g.value(y));
  }
  // rank-3 operand broadcasting a matrix
  Tensor a3 = random_tensor({2, 3, 4}, rng);
  Tensor b2 = random_tensor({3, 4}, rng);
  Graph g;
  Var s = g.add(g.constant(a3), g.constant(b2));
  g.forward();
  for (std::size_t i = 0; i < 24; ++i) EXPECT_EQ(g.value(s)[i], a3[i] + b2[i % 12]);
}

TEST(Graph, ForwardIsDeterministic) {
  Rng rng(11);
  Tensor w1 = random_tensor({5, 7}, rng), w2 = random_tensor({7, 3}, rng);
  Tensor x = random_tensor({4, 5}, rng);
  auto run = [&]() {
    Graph g;
    Var h = g.swish(g.matmul(g.constant(x), g.parameter("w1", w1)));
    g.name(g.log_softmax(g.matmul(h, g.parameter("w2", w2))), "out");
    return forward_eval(g, {}).at("out");
  };
  EXPECT_EQ(run(), run());
}

TEST(GradCheck, RandomMlpCentralDifferences) {
  Rng rng(2024);
  ParamStore store;
  store.add("w1", random_tensor({6, 8}, rng));
  store.add("b1", random_tensor({8}, rng));
  store.add("w2", random_tensor({8, 8}, rng));
  store.add("b2", random_tensor({8}, rng));
  store.add("w3", random_tensor({8, 3}, rng));
  store.add("b3", random_tensor({3}, rng));
  Tensor x = random_tensor({5, 6}, rng);
  Graph g;
  Var h = g.constant(x);
  h = g.tanh(g.add(g.matmul(h, g.parameter(store, "w1")), g.parameter(store, "b1")));
  h = g.sigmoid(g.add(g.matmul(h, g.parameter(store, "w2")), g.parameter(store, "b2")));
  h = g.add(g.matmul(h, g.parameter(store, "w3")), g.parameter(store, "b3"));
  Var loss = weighted_sum(g, g.log_softmax(h), {5, 3}, rng);
  g.forward();
  auto report = check_gradients(g, loss, 1e-4);
  EXPECT_TRUE(report.passed) << report.worst();
  EXPECT_EQ(report.params.size(), 6u);
}

TEST(GradCheck, LinearSigmoidL1Toy) {
  Rng rng(5);
  Tensor w = random_tensor({3, 2}, rng), b = random_tensor({2}, rng);
  Graph g;
  Var y = g.sigmoid(g.add(g.matmul(g.constant(random_tensor({4, 3}, rng)), g.parameter("w", w)),
                          g.parameter("b", b)));
  Var loss = g.mean_abs(g.sub(y, g.constant(random_tensor({4, 2}, rng, 0, 1))));
  g.forward();
  EXPECT_TRUE(check_gradients(g, loss, 1e-4).passed);
}

TEST(GradCheck, CorruptedBackwardIsCaught) {
  auto bad_square = std::make_shared<CustomOp>();
  bad_square->forward = [](const std::vector<const Tensor*>& in) {
    Tensor out(in[0]->shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*in[0])[i] * (*in[0])[i];
    return out;
  };
  bad_square->backward = [](const std::vector<const Tensor*>& in, const Tensor&,
                            const Tensor& g) {
    Tensor d(in[0]->shape());
    // Wrong on purpose: d(x^2)/dx is 2x, not 3x.
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = 3.0 * (*in[0])[i] * g[i];
    return std::vector<Tensor>{d};
  };
  Rng rng(9);
  Tensor w = random_tensor({2, 2}, rng);
  Graph g;
  Var loss = g.sum(g.custom({g.parameter("w", w)}, bad_square, "bad_square"));
  g.forward();
  EXPECT_FALSE(check_gradients(g, loss, 1e-4).passed);
}

TEST(GradCheck, FrozenParamsAbsentFromReport) {
  Rng rng(13);
  Tensor a = random_tensor({3, 3}, rng), b = random_tensor({3, 3}, rng);
  Graph g;
  Var x = g.constant(random_tensor({2, 3}, rng));
  Var loss = g.sum(g.tanh(g.matmul(g.matmul(x, g.parameter("a", a)), g.parameter("b", b))));
  g.freeze({"b"});
  g.forward();
  auto report = check_gradients(g, loss, 1e-4);
  EXPECT_TRUE(report.passed);
  EXPECT_EQ(report.find("b"), nullptr);
  ASSERT_NE(report.find("a"), nullptr);
  auto grads = g.backward(loss);
  EXPECT_EQ(grads.count("b"), 0u);
  EXPECT_EQ(grads.count("a"), 1u);
}

TEST(Freeze, NoneFrozenCoversAllParams) {
  Rng rng(17);
  ParamStore store;
  store.add("p1", random_tensor({2, 2}, rng));
  store.add("p2", random_tensor({2}, rng));
  Graph g;
  Var loss = g.sum(g.add(g.matmul(g.constant(random_tensor({3, 2}, rng)),
                                  g.parameter(store, "p1")),
                         g.parameter(store, "p2")));
  g.forward();
  auto grads = g.backward(loss);
  EXPECT_EQ(grads.size(), 2u);
}

TEST(Freeze, MidGraphWeightStillPassesGradientUpstream) {
  // upstream -> frozen mid -> downstream; the upstream weight's gradient flows
  // through the frozen matrix and must agree with central differences.
  Rng rng(19);
  Tensor up = random_tensor({4, 5}, rng), mid = random_tensor({5, 5}, rng),
         down = random_tensor({5, 2}, rng);
  const Tensor mid_before = mid;
  Graph g;
  Var h = g.tanh(g.matmul(g.constant(random_tensor({3, 4}, rng)), g.parameter("up", up)));
  h = g.swish(g.matmul(h, g.parameter("mid", mid)));
  Var loss = weighted_sum(g, g.matmul(h, g.parameter("down", down)), {3, 2}, rng);
  g.freeze({"mid"});
  g.forward();
  auto grads = g.backward(loss);
  ASSERT_EQ(grads.count("up"), 1u);
  Real norm = 0;
  for (Real v : grads.at("up").values()) norm += std::abs(v);
  EXPECT_GT(norm, 0.0);
  auto report = check_gradients(g, loss, 1e-4);
  EXPECT_TRUE(report.passed);
  EXPECT_EQ(report.find("mid"), nullptr);
  EXPECT_EQ(mid, mid_before);
}

// Every op, randomized shapes, 100+ seeds: analytic gradient vs central
// differences at relative error 1e-4.
TEST(GradCheck, EveryOpMatchesFiniteDifferences) {
  using Builder = std::function<Var(Graph&, Rng&, ParamStore&, Shape&)>;
  std::vector<std::pair<std::string, Builder>> ops;
  auto dims = [](Rng& r) { return std::size_t{1} + r.below(4); };

  ops.emplace_back("matmul", [&](Graph& g, Rng& r, ParamStore& s, Shape& out) {
    std::size_t n = dims(r), k = dims(r), m = dims(r);
    s.add("a", random_tensor({n, k}, r));
    s.add("b", random_tensor({k, m}, r));
    out = {n, m};
    return g.matmul(g.parameter(s, "a"), g.parameter(s, "b"));
  });
  ops.emplace_back("matmul_nt", [&](Graph& g, Rng& r, ParamStore& s, Shape& out) {
    std::size_t n = dims(r), k = dims(r), m = dims(r);
    s.add("a", random_tensor({n, k}, r));
    s.add("b", random_tensor({m, k}, r));
    out = {n, m};
    return g.matmul_nt(g.parameter(s, "a"), g.parameter(s, "b"));
  });
  auto binary = [&](const std::string& name, int which) {
    ops.emplace_back(name, [&, which](Graph& g, Rng& r, ParamStore& s, Shape& out) {
      std::size_t n = dims(r), m = dims(r);
      bool broadcast = r.below(2) == 1;
      s.add("a", random_tensor({n, m}, r));
      s.add("b", broadcast ? random_tensor({m}, r) : random_tensor({n, m}, r));
      out = {n, m};
      Var a = g.parameter(s, "a"), b = g.parameter(s, "b");
      return which == 0 ? g.add(a, b) : which == 1 ? g.sub(a, b) : g.mul(a, b);
    });
  };
  binary("add", 0);
  binary("sub", 1);
  binary("mul", 2);
  auto unary = [&](const std::string& name, std::function<Var(Graph&, Var)> f, Real lo, Real hi) {
    ops.emplace_back(name, [&, f, lo, hi](Graph& g, Rng& r, ParamStore& s, Shape& out) {
      std::size_t n = dims(r), m = dims(r);
      s.add("a", random_tensor({n, m}, r, lo, hi));
      out = {n, m};
      return f(g, g.parameter(s, "a"));
    });
  };
  unary("scale", [](Graph& g, Var a) { return g.scale(a, -1.7); }, -2, 2);
  unary("sigmoid", [](Graph& g, Var a) { return g.sigmoid(a); }, -3, 3);
  unary("swish", [](Graph& g, Var a) { return g.swish(a); }, -3, 3);
  unary("relu", [](Graph& g, Var a) { return g.relu(a); }, -2, 2);
  unary("tanh", [](Graph& g, Var a) { return g.tanh(a); }, -2, 2);
  unary("log", [](Graph& g, Var a) { return g.log(a); }, 0.3, 3);
  unary("softmax", [](Graph& g, Var a) { return g.softmax(a); }, -3, 3);
  unary("log_softmax", [](Graph& g, Var a) { return g.log_softmax(a); }, -3, 3);
  ops.emplace_back("mean_abs", [&](Graph& g, Rng& r, ParamStore& s, Shape& out) {
    s.add("a", random_tensor({dims(r), dims(r)}, r));
    out = {1};
    return g.mean_abs(g.parameter(s, "a"));
  });
  ops.emplace_back("masked_mean_abs", [&](Graph& g, Rng& r, ParamStore& s, Shape& out) {
    std::size_t n = 2 + r.below(4), m = dims(r);
    s.add("p", random_tensor({n, m}, r));
    s.add("t", random_tensor({n, m}, r));
    std::vector<Real> mask(n, 1.0);
    mask[r.below(n)] = 0.0;
    out = {1};
    return g.masked_mean_abs(g.parameter(s, "p"), g.parameter(s, "t"), mask);
  });
  ops.emplace_back("layer_norm", [&](Graph& g, Rng& r, ParamStore& s, Shape& out) {
    std::size_t n = dims(r), m = 2 + r.below(5);
    s.add("x", random_tensor({n, m}, r, -2, 2));
    s.add("g", random_tensor({m}, r, 0.5, 1.5));
    s.add("b", random_tensor({m}, r));
    out = {n, m};
    return g.layer_norm(g.parameter(s, "x"), g.parameter(s, "g"), g.parameter(s, "b"));
  });
  ops.emplace_back("conv1d", [&](Graph& g, Rng& r, ParamStore& s, Shape& out) {
    Conv1dOptions o;
    o.stride = 1 + r.below(2);
    o.padding = r.below(3);
    std::size_t k = 1 + 2 * r.below(2), cin = dims(r), cout = dims(r);
    std::size_t len = k + r.below(6);
    s.add("x", random_tensor({len, cin}, r));
    s.add("w", random_tensor({k, cin, cout}, r));
    out = {(len + 2 * o.padding - k) / o.stride + 1, cout};
    return g.conv1d(g.parameter(s, "x"), g.parameter(s, "w"), o);
  });
  ops.emplace_back("conv1d_depthwise", [&](Graph& g, Rng& r, ParamStore& s, Shape& out) {
    Conv1dOptions o;
    o.depthwise = true;
    std::size_t k = 1 + 2 * r.below(3), c = dims(r);
    o.padding = k / 2;
    std::size_t len = 1 + r.below(6);
    s.add("x", random_tensor({len, c}, r));
    s.add("w", random_tensor({k, c}, r));
    out = {len, c};
    return g.conv1d(g.parameter(s, "x"), g.parameter(s, "w"), o);
  });
  ops.emplace_back("slice_concat", [&](Graph& g, Rng& r, ParamStore& s, Shape& out) {
    std::size_t n = dims(r);
    s.add("a", random_tensor({n, 5}, r));
    s.add("b", random_tensor({n, 2}, r));
    Var a = g.parameter(s, "a");
    Var left = g.slice_cols(a, 1, 3);
    Var joined = g.concat_cols({left, g.parameter(s, "b")});
    Var rows = g.concat_rows({joined, g.slice_rows(joined, 0, 1)});
    out = {n + 1, 5};
    return rows;
  });
  ops.emplace_back("interleave_rows", [&](Graph& g, Rng& r, ParamStore& s, Shape& out) {
    std::size_t n = dims(r), m = dims(r);
    std::vector<Var> parts;
    for (int j = 0; j < 4; ++j) {
      std::string name = "p" + std::to_string(j);
      s.add(name, random_tensor({n, m}, r));
      parts.push_back(g.parameter(s, name));
    }
    out = {4 * n, m};
    return g.interleave_rows(parts);
  });
  ops.emplace_back("rel_pos_bias", [&](Graph& g, Rng& r, ParamStore& s, Shape& out) {
    std::size_t heads = dims(r), clip = 1 + r.below(3), len = 1 + r.below(6);
    s.add("t", random_tensor({heads, 2 * clip + 1}, r));
    out = {len, len};
    return g.rel_pos_bias(g.parameter(s, "t"), r.below(heads), len);
  });

  int checked = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const auto& [name, build] = ops[seed % ops.size()];
    Rng rng(seed * 7919 + 1);
    ParamStore store;
    Graph g;
    Shape out;
    Var y = build(g, rng, store, out);
    Var loss = out == Shape{1} ? y : weighted_sum(g, y, out, rng);
    g.forward();
    auto report = check_gradients(g, loss, 1e-4);
    EXPECT_TRUE(report.passed) << name << " seed " << seed << " worst " << report.worst();
    ++checked;
  }
  EXPECT_GE(checked, 100);
}
