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

#ifndef RECIPEGEN_NN_LAYERS_HPP_
#define RECIPEGEN_NN_LAYERS_HPP_

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "recipegen/nn/ops.hpp"
#include "recipegen/nn/tape.hpp"

namespace recipegen::nn {

using Rng = std::mt19937_64;

// Values are drawn in double precision and then cast, so float and double
// models built from the same seed start from the same point.
template <typename T>
Matrix<T> uniform_init(Index rows, Index cols, double bound, Rng& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix<T> m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = static_cast<T>(dist(rng));
  return m;
}

template <typename T>
Matrix<T> xavier_init(Index fan_in, Index fan_out, Rng& rng) {
  return uniform_init<T>(fan_in, fan_out, std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)),
                         rng);
}

template <typename T>
Matrix<T> normal_init(Index rows, Index cols, double stddev, Rng& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  Matrix<T> m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = static_cast<T>(dist(rng));
  return m;
}

// y = x W + b with W stored in x out.
template <typename T>
class Linear {
 public:
  Linear() = default;
  Linear(ParameterStore<T>& store, const std::string& name, Index in, Index out, Rng& rng,
         bool bias = true)
      : in_(in), out_(out) {
    weight_ = &store.add(name + ".weight", xavier_init<T>(in, out, rng));
    if (bias) bias_ = &store.add(name + ".bias", Matrix<T>::Zero(1, out));
  }

  Var<T> operator()(Tape<T>& tape, const Var<T>& x) const {
    if (x.cols() != in_)
      throw ShapeError("linear '" + weight_->name + "': input has " + std::to_string(x.cols()) +
                       " columns, expected " + std::to_string(in_));
    Var<T> y = matmul(x, tape.parameter(*weight_));
    if (bias_) y = add_row(y, tape.parameter(*bias_));
    return y;
  }

  Parameter<T>& weight() const { return *weight_; }
  Parameter<T>* bias() const { return bias_; }
  Index in() const { return in_; }
  Index out() const { return out_; }

 private:
  Index in_ = 0;
  Index out_ = 0;
  Parameter<T>* weight_ = nullptr;
  Parameter<T>* bias_ = nullptr;
};

template <typename T>
class LayerNorm {
 public:
  LayerNorm() = default;
  LayerNorm(ParameterStore<T>& store, const std::string& name, Index dim) {
    gain_ = &store.add(name + ".gain", Matrix<T>::Ones(1, dim));
    bias_ = &store.add(name + ".bias", Matrix<T>::Zero(1, dim));
  }

  Var<T> operator()(Tape<T>& tape, const Var<T>& x) const {
    return layer_norm(x, tape.parameter(*gain_), tape.parameter(*bias_));
  }

 private:
  Parameter<T>* gain_ = nullptr;
  Parameter<T>* bias_ = nullptr;
};

template <typename T>
class FeedForward {
 public:
  FeedForward() = default;
  FeedForward(ParameterStore<T>& store, const std::string& name, Index dim, Index hidden, Rng& rng)
      : up_(store, name + ".up", dim, hidden, rng), down_(store, name + ".down", hidden, dim, rng) {}

  Var<T> operator()(Tape<T>& tape, const Var<T>& x) const {
    return down_(tape, relu(up_(tape, x)));
  }

 private:
  Linear<T> up_;
  Linear<T> down_;
};

template <typename T>
struct AttentionOutput {
  Var<T> output;
  std::vector<Var<T>> weights;  // one (queries x keys) matrix per head
};

// Scaled dot-product attention with `heads` heads. `mask` is an additive
// (queries x keys) matrix of 0 / -inf entries.
template <typename T>
class MultiHeadAttention {
 public:
  MultiHeadAttention() = default;
  MultiHeadAttention(ParameterStore<T>& store, const std::string& name, Index dim, int heads,
                     Rng& rng)
      : dim_(dim), heads_(heads) {
    if (heads <= 0 || dim % heads != 0)
      throw ShapeError("attention '" + name + "': dim " + std::to_string(dim) +
                       " not divisible by " + std::to_string(heads) + " heads");
    q_ = Linear<T>(store, name + ".query", dim, dim, rng);
    k_ = Linear<T>(store, name + ".key", dim, dim, rng);
    v_ = Linear<T>(store, name + ".value", dim, dim, rng);
    o_ = Linear<T>(store, name + ".out", dim, dim, rng);
  }

  AttentionOutput<T> forward(Tape<T>& tape, const Var<T>& queries, const Var<T>& keys,
                             const Var<T>& values, const Matrix<T>* mask = nullptr) const {
    if (keys.rows() != values.rows()) throw ShapeError("attention: keys/values length mismatch");
    const Var<T> q = q_(tape, queries);
    const Var<T> k = k_(tape, keys);
    const Var<T> v = v_(tape, values);
    const Index hd = dim_ / heads_;
    const T s = T(1) / std::sqrt(static_cast<T>(hd));
    AttentionOutput<T> out;
    std::vector<Var<T>> parts;
    for (int h = 0; h < heads_; ++h) {
      Var<T> logits = scale(matmul_nt(slice_cols(q, h * hd, hd), slice_cols(k, h * hd, hd)), s);
      Var<T> w = softmax_rows(logits, mask);
      out.weights.push_back(w);
      parts.push_back(matmul(w, slice_cols(v, h * hd, hd)));
    }
    out.output = o_(tape, heads_ == 1 ? parts.front() : concat_cols(parts));
    return out;
  }

  Var<T> operator()(Tape<T>& tape, const Var<T>& queries, const Var<T>& keys,
                    const Matrix<T>* mask = nullptr) const {
    return forward(tape, queries, keys, keys, mask).output;
  }

  Index dim() const { return dim_; }
  int heads() const { return heads_; }
  const Linear<T>& query() const { return q_; }
  const Linear<T>& key() const { return k_; }
  const Linear<T>& value() const { return v_; }
  const Linear<T>& out() const { return o_; }

 private:
  Index dim_ = 0;
  int heads_ = 1;
  Linear<T> q_, k_, v_, o_;
};

// Sinusoidal position encoding, rows = positions.
template <typename T>
Matrix<T> sinusoidal_encoding(Index positions, Index dim, Index offset = 0) {
  Matrix<T> pe(positions, dim);
  for (Index p = 0; p < positions; ++p) {
    for (Index i = 0; i < dim; ++i) {
      const double rate = std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / static_cast<double>(dim));
      const double a = static_cast<double>(p + offset) * rate;
      pe(p, i) = static_cast<T>(i % 2 == 0 ? std::sin(a) : std::cos(a));
    }
  }
  return pe;
}

}  // namespace recipegen::nn

#endif  // RECIPEGEN_NN_LAYERS_HPP_
