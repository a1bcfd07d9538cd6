// Copyright 2026 The recipegen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "recipegen/nn/adam.hpp"
#include "recipegen/nn/grad_check.hpp"
#include "recipegen/nn/gumbel.hpp"
#include "recipegen/nn/layers.hpp"
#include "recipegen/nn/ops.hpp"
#include "recipegen/nn/serialize.hpp"

namespace {

using namespace recipegen;
using namespace recipegen::nn;
using M = Matrix<double>;
using V = Var<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

M random_matrix(Index r, Index c, std::uint64_t seed) {
  Rng rng(seed);
  return uniform_init<double>(r, c, 1.0, rng);
}

// Scalar probe: sum(y .* w) for a fixed random w, so every output entry
// contributes a distinct weight to the gradient.
V probe(Tape<double>& t, const V& y, std::uint64_t seed = 99) {
  return sum(mul(y, t.constant(random_matrix(y.rows(), y.cols(), seed))));
}

struct OpCase {
  std::string name;
  std::function<V(Tape<double>&, ParameterStore<double>&)> f;
};

void PrintTo(const OpCase& c, std::ostream* os) { *os << c.name; }

class OpGradients : public ::testing::TestWithParam<OpCase> {};

TEST_P(OpGradients, MatchCentralDifferences) {
  ParameterStore<double> store;
  store.add("a", random_matrix(3, 4, 1));
  store.add("b", random_matrix(4, 3, 2));
  store.add("c", random_matrix(3, 4, 3));
  store.add("r", random_matrix(1, 4, 4));
  store.add("pos", (random_matrix(3, 4, 5).array().abs() + 0.5).matrix());
  const auto& f = GetParam().f;
  const auto res = grad_check<double>(store, [&](Tape<double>& t) { return probe(t, f(t, store)); });
  EXPECT_LT(res.max_rel_error, 1e-6) << GetParam().name << " worst " << res.worst_parameter;
  EXPECT_GT(res.checked, 0);
}

#define P(n) t.parameter(s.at(n))
INSTANTIATE_TEST_SUITE_P(
    Ops, OpGradients,
    ::testing::Values(
        OpCase{"matmul", [](auto& t, auto& s) { return matmul(P("a"), P("b")); }},
        OpCase{"matmul_nt", [](auto& t, auto& s) { return matmul_nt(P("a"), P("c")); }},
        OpCase{"add_sub_mul", [](auto& t, auto& s) { return mul(add(P("a"), P("c")), sub(P("a"), P("c"))); }},
        OpCase{"rows", [](auto& t, auto& s) { return mul_row(add_row(P("a"), P("r")), P("r")); }},
        OpCase{"scale_sigmoid_tanh", [](auto& t, auto& s) { return tanh(sigmoid(scale(P("a"), 1.7))); }},
        OpCase{"relu", [](auto& t, auto& s) { return relu(P("a")); }},
        OpCase{"exp_log", [](auto& t, auto& s) { return add(exp(P("a")), log(P("pos"))); }},
        OpCase{"softmax", [](auto& t, auto& s) { return softmax_rows(P("a")); }},
        OpCase{"softmax_masked",
               [](auto& t, auto& s) {
                 static const M mask = [] {
                   M m = M::Zero(3, 4);
                   m(0, 1) = -kInf;
                   m(2, 3) = -kInf;
                   return m;
                 }();
                 return softmax_rows(P("a"), &mask);
               }},
        OpCase{"log_softmax", [](auto& t, auto& s) { return log_softmax_rows(P("a")); }},
        OpCase{"concat_slice",
               [](auto& t, auto& s) {
                 V x = concat_rows<double>({P("a"), P("c"), P("r")});
                 V y = concat_cols<double>({slice_rows(x, 1, 4), slice_rows(x, 3, 4)});
                 return slice_cols(y, 2, 5);
               }},
        OpCase{"transpose", [](auto& t, auto& s) { return matmul(transpose(P("b")), transpose(P("a"))); }},
        OpCase{"max_rows", [](auto& t, auto& s) { return max_rows(P("a")); }},
        OpCase{"max_elementwise", [](auto& t, auto& s) { return max_elementwise<double>({P("a"), P("c")}); }},
        OpCase{"mean_pick", [](auto& t, auto& s) { return matmul(pick(P("c"), 1, 2), mean_rows(P("a"))); }},
        OpCase{"mean_pick_scalar", [](auto& t, auto& s) { return mul(pick(P("a"), 2, 1), pick(P("c"), 0, 3)); }},
        OpCase{"gather", [](auto& t, auto& s) { return gather_rows(P("b"), {0, 3, 0, 2}); }},
        OpCase{"layer_norm", [](auto& t, auto& s) { return layer_norm(P("a"), P("r"), P("r")); }}),
    [](const auto& info) { return info.param.name; });
#undef P

TEST(Ops, ShapeErrors) {
  Tape<double> t;
  V a = t.constant(M::Zero(2, 3)), b = t.constant(M::Zero(2, 3));
  EXPECT_THROW(matmul(a, b), ShapeError);
  EXPECT_THROW(add(a, t.constant(M::Zero(3, 2))), ShapeError);
  EXPECT_THROW(slice_rows(a, 1, 2), ShapeError);
  EXPECT_THROW(gather_rows(a, {2}), ShapeError);
}

TEST(Ops, MaskedSoftmaxIsExactlyZeroAndSumsToOne) {
  Tape<double> t(false);
  M mask = M::Zero(2, 3);
  mask(0, 0) = -kInf;
  mask(1, 2) = -kInf;
  V y = softmax_rows(t.constant(random_matrix(2, 3, 7)), &mask);
  EXPECT_EQ(y.value()(0, 0), 0.0);
  EXPECT_EQ(y.value()(1, 2), 0.0);
  for (Index r = 0; r < 2; ++r) EXPECT_NEAR(y.value().row(r).sum(), 1.0, 1e-15);
  M full = M::Constant(1, 2, -kInf);
  EXPECT_THROW(softmax_rows(t.constant(M::Zero(1, 2)), &full), ShapeError);
}

TEST(Ops, GradientsAccumulateAcrossUses) {
  ParameterStore<double> s;
  auto& x = s.add("x", M::Constant(1, 1, 3.0));
  Tape<double> t;
  V v = t.parameter(x);
  t.backward(add(mul(v, v), v));  // d/dx (x^2 + x) = 7
  EXPECT_DOUBLE_EQ(x.grad(0, 0), 7.0);
}

TEST(Linear, IdentityAndZeroCases) {
  ParameterStore<double> s;
  Rng rng(1);
  Linear<double> lin(s, "lin", 3, 3, rng);
  lin.weight().value = M::Identity(3, 3);
  Tape<double> t(false);
  const M x = random_matrix(2, 3, 5);
  EXPECT_EQ(lin(t, t.constant(x)).value(), x);
  lin.weight().value.setZero();
  lin.bias()->value = random_matrix(1, 3, 6);
  const M y = lin(t, t.constant(x)).value();
  for (Index r = 0; r < 2; ++r) EXPECT_EQ(M(y.row(r)), lin.bias()->value);
  EXPECT_THROW(lin(t, t.constant(M::Zero(1, 4))), ShapeError);
}

TEST(Linear, MatchesLoopProduct) {
  ParameterStore<double> s;
  Rng rng(2);
  Linear<double> lin(s, "lin", 4, 5, rng);
  lin.bias()->value = random_matrix(1, 5, 3);
  const M x = random_matrix(3, 4, 4);
  Tape<double> t(false);
  const M y = lin(t, t.constant(x)).value();
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 5; ++j) {
      double acc = lin.bias()->value(0, j);
      for (Index k = 0; k < 4; ++k) acc += x(i, k) * lin.weight().value(k, j);
      EXPECT_NEAR(y(i, j), acc, 1e-12);
    }
}

TEST(Attention, SingleKeyReturnsValueProjection) {
  ParameterStore<double> s;
  Rng rng(3);
  MultiHeadAttention<double> mha(s, "att", 4, 2, rng);
  Tape<double> t(false);
  const M kv = random_matrix(1, 4, 8);
  V kvv = t.constant(kv);
  const M expected = mha.out()(t, mha.value()(t, kvv)).value();
  for (std::uint64_t seed : {10u, 11u}) {
    const M y = mha(t, t.constant(random_matrix(1, 4, seed)), kvv).value();
    EXPECT_LT((y - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Attention, MaskLeavingOnePositionGivesUnitWeight) {
  ParameterStore<double> s;
  Rng rng(4);
  MultiHeadAttention<double> mha(s, "att", 4, 2, rng);
  Tape<double> t(false);
  M mask = M::Constant(2, 3, -kInf);
  mask.col(1).setZero();
  const auto out = mha.forward(t, t.constant(random_matrix(2, 4, 1)), t.constant(random_matrix(3, 4, 2)),
                               t.constant(random_matrix(3, 4, 2)), &mask);
  for (const auto& w : out.weights) {
    EXPECT_EQ(w.value().col(1), M::Ones(2, 1));
    EXPECT_EQ(w.value().col(0), M::Zero(2, 1));
  }
}

// Direct per-head loop computation of scaled dot-product attention.
TEST(Attention, MatchesDenseLoopOracle) {
  ParameterStore<double> s;
  Rng rng(5);
  const int heads = 2;
  MultiHeadAttention<double> mha(s, "att", 6, heads, rng);
  const M q = random_matrix(3, 6, 21), kv = random_matrix(4, 6, 22);
  Tape<double> t(false);
  const M y = mha(t, t.constant(q), t.constant(kv)).value();
  auto proj = [](const M& x, const Linear<double>& l) {
    M out = x * l.weight().value;
    out.rowwise() += l.bias()->value.row(0);
    return out;
  };
  const M Q = proj(q, mha.query()), K = proj(kv, mha.key()), Vv = proj(kv, mha.value());
  M concat(3, 6);
  const int hd = 3;
  for (int h = 0; h < heads; ++h)
    for (int i = 0; i < 3; ++i) {
      std::vector<double> logit(4);
      double mx = -kInf;
      for (int j = 0; j < 4; ++j) {
        double d = 0;
        for (int k = 0; k < hd; ++k) d += Q(i, h * hd + k) * K(j, h * hd + k);
        logit[static_cast<std::size_t>(j)] = d / std::sqrt(double(hd));
        mx = std::max(mx, logit[static_cast<std::size_t>(j)]);
      }
      double z = 0;
      for (double& l : logit) z += (l = std::exp(l - mx));
      for (int k = 0; k < hd; ++k) {
        double acc = 0;
        for (int j = 0; j < 4; ++j) acc += logit[static_cast<std::size_t>(j)] / z * Vv(j, h * hd + k);
        concat(i, h * hd + k) = acc;
      }
    }
  const M expected = proj(concat, mha.out());
  EXPECT_LT((y - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Attention, IndivisibleHeadsRejected) {
  ParameterStore<double> s;
  Rng rng(6);
  EXPECT_THROW(MultiHeadAttention<double>(s, "att", 6, 4, rng), ShapeError);
}

TEST(Attention, GradientCheck) {
  ParameterStore<double> s;
  Rng rng(7);
  MultiHeadAttention<double> mha(s, "att", 4, 2, rng);
  LayerNorm<double> ln(s, "ln", 4);
  FeedForward<double> ff(s, "ff", 4, 8, rng);
  s.add("x", random_matrix(3, 4, 30));
  // The key bias shifts every logit of a query row equally, so its exact
  // gradient is zero and finite differences only see rounding noise.
  const auto res = grad_check<double>(
      s,
      [&](Tape<double>& t) {
        V x = t.parameter(s.at("x"));
        return probe(t, ff(t, ln(t, add(x, mha(t, x, x)))));
      },
      1e-6, 1e-4);
  EXPECT_LT(s.at("att.key.bias").grad.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(res.max_rel_error, 1e-5) << res.worst_parameter;
}

TEST(PositionEncoding, SinusoidalValues) {
  const M pe = sinusoidal_encoding<double>(3, 4);
  EXPECT_EQ(pe(0, 0), 0.0);
  EXPECT_EQ(pe(0, 1), 1.0);
  EXPECT_NEAR(pe(2, 0), std::sin(2.0), 1e-15);
  EXPECT_NEAR(pe(1, 2), std::sin(1.0 / 100.0), 1e-15);
}

TEST(Gumbel, ZeroNoiseIsTemperedSoftmax) {
  Tape<double> t(false);
  const M logits = random_matrix(1, 5, 40);
  for (double tau : {1.0, 0.5, 2.0}) {
    const auto g = gumbel_softmax<double>(t.constant(logits), tau, false, M::Zero(1, 5));
    M expected = (logits / tau).array().exp().matrix();
    expected /= expected.sum();
    EXPECT_LT((g.y.value() - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Gumbel, SmallTemperatureApproachesOneHot) {
  Tape<double> t(false);
  const M logits = random_matrix(1, 6, 41);
  Rng rng(1);
  const M noise = sample_gumbel<double>(6, rng);
  const auto g = gumbel_softmax<double>(t.constant(logits), 1e-4, false, noise);
  const Index arg = argmax_row<double>(M(logits + noise));
  EXPECT_NEAR(g.y.value()(0, arg), 1.0, 1e-9);
  EXPECT_EQ(g.index, arg);
}

TEST(Gumbel, HardIsExactlyOneHotAndSimplex) {
  Tape<double> t(false);
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const auto g = gumbel_softmax<double>(t.constant(random_matrix(1, 7, 100 + i)), 0.7, true, rng);
    EXPECT_EQ(g.y.value().sum(), 1.0);
    EXPECT_EQ((g.y.value().array() == 1.0).count(), 1);
    EXPECT_EQ((g.y.value().array() == 0.0).count(), 6);
    EXPECT_NEAR(g.soft.value().sum(), 1.0, 1e-12);
  }
}

TEST(Gumbel, MaskedEntriesNeverChosen) {
  Tape<double> t(false);
  Rng rng(3);
  M mask = M::Zero(1, 4);
  mask(0, 2) = -kInf;
  for (int i = 0; i < 500; ++i) {
    const auto g = gumbel_softmax<double>(t.constant(M::Zero(1, 4)), 1.0, true, rng, &mask);
    EXPECT_NE(g.index, 2);
    EXPECT_EQ(g.soft.value()(0, 2), 0.0);
  }
}

TEST(Gumbel, MonteCarloFrequenciesMatchProbabilities) {
  Rng rng(4);
  const M uniform = M::Zero(1, 4);
  M skewed(1, 4);
  skewed << std::log(0.1), std::log(0.2), std::log(0.3), std::log(0.4);
  for (const M& logits : {uniform, skewed}) {
    std::vector<int> counts(4, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(argmax_row<double>(M(logits + sample_gumbel<double>(4, rng))))];
    M p = logits.array().exp().matrix();
    p /= p.sum();
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(counts[static_cast<std::size_t>(k)] / double(n), p(0, k), 0.02);
  }
}

TEST(Gumbel, NonPositiveTauRejected) {
  Tape<double> t(false);
  EXPECT_THROW(gumbel_softmax<double>(t.constant(M::Zero(1, 2)), 0.0, false, M::Zero(1, 2)), ConfigError);
}

// Straight-through: the gradient of a loss on the hard sample equals the
// gradient of the same loss applied to the soft sample.
TEST(Gumbel, StraightThroughGradientFollowsSoftSample) {
  Rng rng(5);
  const M noise = sample_gumbel<double>(5, rng);
  const M w = random_matrix(1, 5, 9);
  auto grad_of = [&](bool hard) {
    ParameterStore<double> s;
    auto& p = s.add("logits", random_matrix(1, 5, 8));
    Tape<double> t;
    const auto g = gumbel_softmax<double>(t.parameter(p), 0.8, hard, noise);
    t.backward(sum(mul(g.y, t.constant(w))));
    return M(p.grad);
  };
  EXPECT_LT((grad_of(true) - grad_of(false)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Adam, ZeroGradientZeroDecayIsFixedPoint) {
  ParameterStore<double> s;
  auto& p = s.add("w", random_matrix(2, 3, 1));
  const M before = p.value;
  OptimizerConfig cfg;
  cfg.weight_decay = 0.0;
  AdamState<double> st;
  for (int i = 0; i < 5; ++i) adam_step(s, cfg, st, cfg.lr);
  EXPECT_EQ(p.value, before);
}

TEST(Adam, FirstStepHandComputation) {
  ParameterStore<double> s;
  auto& p = s.add("w", M::Zero(1, 3));
  p.grad << 0.5, -2.0, 1e-3;
  OptimizerConfig cfg;
  cfg.weight_decay = 0.0;
  cfg.lr = 0.1;
  AdamState<double> st;
  adam_step(s, cfg, st, cfg.lr);
  // Bias correction makes m_hat = g and v_hat = g^2 after one step.
  for (Index j = 0; j < 3; ++j) {
    const double g = j == 0 ? 0.5 : j == 1 ? -2.0 : 1e-3;
    EXPECT_NEAR(p.value(0, j), -0.1 * g / (std::abs(g) + cfg.eps), 1e-15);
  }
}

TEST(Adam, DecoupledDecayAndWarmup) {
  ParameterStore<double> s;
  auto& p = s.add("w", M::Constant(1, 1, 2.0));
  OptimizerConfig cfg;
  cfg.lr = 0.01;
  cfg.weight_decay = 0.1;
  AdamState<double> st;
  adam_step(s, cfg, st, cfg.lr);
  EXPECT_NEAR(p.value(0, 0), 2.0 - 0.01 * 0.1 * 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(cfg.lr_for_epoch(0), cfg.lr / 5);
  EXPECT_DOUBLE_EQ(cfg.lr_for_epoch(2), cfg.lr * 3 / 5);
  EXPECT_DOUBLE_EQ(cfg.lr_for_epoch(4), cfg.lr);
  EXPECT_DOUBLE_EQ(cfg.lr_for_epoch(30), cfg.lr);
}

TEST(Adam, ConfigValidation) {
  OptimizerConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.lr = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.beta1 = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Adam, GradientClipScalesGlobalNorm) {
  ParameterStore<double> s;
  auto& p = s.add("w", M::Zero(1, 2));
  p.grad << 3.0, 4.0;
  OptimizerConfig cfg;
  cfg.grad_clip = 1.0;
  cfg.weight_decay = 0.0;
  AdamState<double> st;
  adam_step(s, cfg, st, 0.1);
  EXPECT_NEAR(st.m.at("w")(0, 0), 0.1 * 0.6, 1e-15);
  EXPECT_NEAR(st.m.at("w")(0, 1), 0.1 * 0.8, 1e-15);
}

TEST(GradCheck, SquareAtThree) {
  ParameterStore<double> s;
  s.add("x", M::Constant(1, 1, 3.0));
  const auto res = grad_check<double>(s, [&](Tape<double>& t) {
    V x = t.parameter(s.at("x"));
    return mul(x, x);
  });
  EXPECT_NEAR(res.analytic, 6.0, 1e-12);
  EXPECT_NEAR(res.numeric, 6.0, 1e-6);
}

TEST(GradCheck, DetectsWrongGradient) {
  ParameterStore<double> s;
  s.add("x", M::Constant(1, 1, 3.0));
  // An op whose recorded backward is deliberately off by a factor of two.
  const auto res = grad_check<double>(s, [&](Tape<double>& t) {
    V x = t.parameter(s.at("x"));
    const int ix = x.id();
    return t.record(x.value() * 2.0, {x}, [ix](Tape<double>& tt, int self) {
      tt.accumulate(ix, tt.grad(self) * 4.0);
    });
  });
  EXPECT_GT(res.max_rel_error, 0.4);
}

TEST(Serialize, ParametersAndOptimizerRoundTrip) {
  ParameterStore<double> a, b;
  a.add("x", random_matrix(2, 3, 1));
  a.add("y", random_matrix(1, 4, 2));
  b.add("x", M::Zero(2, 3));
  b.add("y", M::Zero(1, 4));
  parameters_from_json(b, parameters_to_json(a));
  EXPECT_EQ(b.at("x").value, a.at("x").value);
  EXPECT_EQ(b.at("y").value, a.at("y").value);
  AdamState<double> st;
  st.step = 7;
  st.m["x"] = random_matrix(2, 3, 3);
  st.v["x"] = random_matrix(2, 3, 4);
  const auto back = adam_from_json<double>(nlohmann::json::parse(adam_to_json(st).dump()));
  EXPECT_EQ(back.step, 7);
  EXPECT_EQ(back.m.at("x"), st.m.at("x"));
  EXPECT_EQ(back.v.at("x"), st.v.at("x"));
  ParameterStore<double> c;
  c.add("x", M::Zero(3, 2));
  c.add("y", M::Zero(1, 4));
  EXPECT_THROW(parameters_from_json(c, parameters_to_json(a)), ValidationError);
}

}  // namespace
