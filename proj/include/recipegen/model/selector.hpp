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

#ifndef RECIPEGEN_MODEL_SELECTOR_HPP_
#define RECIPEGEN_MODEL_SELECTOR_HPP_

#include <set>
#include <string>
#include <vector>

#include "recipegen/core/error.hpp"
#include "recipegen/nn/gumbel.hpp"
#include "recipegen/nn/ops.hpp"

namespace recipegen::model {

using nn::Index;
using nn::Matrix;
using nn::Var;

// Element-wise max over layers, then over slots: one 1 x hidden vector.
template <typename T>
Var<T> pool_memory(const std::vector<Var<T>>& memories) {
  if (memories.empty()) throw nn::ShapeError("pool_memory: no layers");
  Var<T> m = memories.size() == 1 ? memories.front() : nn::max_elementwise(memories);
  return m.rows() == 1 ? m : nn::max_rows(m);
}

// Additive 1 x (n + 1) mask over candidates plus STOP (last column). STOP is
// never masked, so masking every candidate forces STOP.
template <typename T>
Matrix<T> selection_mask(Index n, const std::set<int>& forbidden) {
  Matrix<T> mask = Matrix<T>::Zero(1, n + 1);
  for (int i : forbidden) {
    if (i < 0 || i >= n) throw ValidationError("selection mask: index " + std::to_string(i) + " out of range");
    mask(0, i) = nn::neg_infinity<T>();
  }
  return mask;
}

// Dot products (h_n . V_t) for n = 1..N, then stop . V_t.
template <typename T>
Var<T> event_logits(const Var<T>& events, const Var<T>& pooled, const Var<T>& stop) {
  return nn::matmul_nt(pooled, nn::concat_rows<T>({events, stop}));
}

template <typename T>
Var<T> event_probabilities(const Var<T>& logits, const Matrix<T>& mask) {
  return nn::softmax_rows(logits, &mask);
}

enum class SelectMode { kTrain, kInfer };

template <typename T>
struct Selection {
  Var<T> y;         // 1 x (N + 1) selection weights (one-hot when hard)
  Index index = 0;  // chosen column; N is STOP
  bool stop = false;
};

// Train: straight-through Gumbel-softmax sample (or forced to `forced`).
// Infer: argmax of the masked probabilities.
template <typename T>
Selection<T> select_event(const Var<T>& logits, const Matrix<T>& mask, SelectMode mode, T tau,
                          bool hard, nn::Rng& rng, Index forced = -1) {
  Selection<T> s;
  const Index n = logits.cols() - 1;
  if (mode == SelectMode::kInfer) {
    s.index = nn::argmax_row<T>(nn::detail::softmax_values<T>(logits.value(), &mask));
    s.y = logits.tape()->constant(nn::one_hot<T>(logits.cols(), s.index));
  } else {
    nn::GumbelSample<T> g = nn::gumbel_softmax(logits, tau, hard, rng, &mask, forced);
    s.index = g.index;
    s.y = g.y;
  }
  s.stop = s.index == n;
  return s;
}

// Selected representation: the weighted sum of candidate rows (STOP weight
// dropped). Equals h_c for a one-hot selection.
template <typename T>
Var<T> selected_vector(const Selection<T>& s, const Var<T>& events) {
  return nn::matmul(nn::slice_cols(s.y, 0, events.rows()), events);
}

}  // namespace recipegen::model

#endif  // RECIPEGEN_MODEL_SELECTOR_HPP_
