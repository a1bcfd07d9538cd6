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

#ifndef RECIPEGEN_MODEL_ENCODER_HPP_
#define RECIPEGEN_MODEL_ENCODER_HPP_

#include <string>

#include "recipegen/core/error.hpp"
#include "recipegen/core/types.hpp"
#include "recipegen/nn/layers.hpp"
#include "recipegen/nn/ops.hpp"

namespace recipegen::model {

using nn::Index;
using nn::Matrix;
using nn::Var;

// Candidate features as an N x d_e matrix.
template <typename T>
Matrix<T> feature_matrix(const EventCandidateSet& set) {
  const auto n = static_cast<Index>(set.size());
  const auto d = static_cast<Index>(set.feature_dim());
  Matrix<T> m(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j)
      m(i, j) = static_cast<T>(set[static_cast<std::size_t>(i)].feature[static_cast<std::size_t>(j)]);
  return m;
}

// Normalized (start, end, length) per candidate.
template <typename T>
Matrix<T> relative_positions(const EventCandidateSet& set, double duration) {
  if (!(duration > 0.0)) throw ValidationError("encode_events: duration must be positive");
  Matrix<T> m(static_cast<Index>(set.size()), 3);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& iv = set[i].interval;
    const auto r = static_cast<Index>(i);
    m(r, 0) = static_cast<T>(iv.start / duration);
    m(r, 1) = static_cast<T>(iv.end / duration);
    m(r, 2) = static_cast<T>(iv.length() / duration);
  }
  return m;
}

// e_n = MLP(feature_n) + PE(n) + RelEnc(start, end, length).
template <typename T>
class EventEncoder {
 public:
  EventEncoder() = default;
  EventEncoder(nn::ParameterStore<T>& store, const std::string& name, Index feature_dim,
               Index hidden, nn::Rng& rng)
      : hidden_(hidden),
        l1_(store, name + ".mlp1", feature_dim, hidden, rng),
        l2_(store, name + ".mlp2", hidden, hidden, rng),
        rel_(store, name + ".rel", 3, hidden, rng) {}

  Var<T> operator()(nn::Tape<T>& tape, const EventCandidateSet& set, double duration) const {
    if (set.empty()) throw ValidationError("encode_events: empty candidate set");
    const Matrix<T> rel = relative_positions<T>(set, duration);
    Var<T> x = tape.constant(feature_matrix<T>(set));
    Var<T> e = l2_(tape, nn::relu(l1_(tape, x)));
    e = nn::add(e, rel_(tape, tape.constant(rel)));
    return nn::add(e, tape.constant(nn::sinusoidal_encoding<T>(rel.rows(), hidden_)));
  }

  const nn::Linear<T>& mlp1() const { return l1_; }
  const nn::Linear<T>& mlp2() const { return l2_; }
  const nn::Linear<T>& rel() const { return rel_; }

 private:
  Index hidden_ = 0;
  nn::Linear<T> l1_, l2_, rel_;
};

}  // namespace recipegen::model

#endif  // RECIPEGEN_MODEL_ENCODER_HPP_
