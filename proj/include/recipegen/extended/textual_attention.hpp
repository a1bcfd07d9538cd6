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

#ifndef RECIPEGEN_EXTENDED_TEXTUAL_ATTENTION_HPP_
#define RECIPEGEN_EXTENDED_TEXTUAL_ATTENTION_HPP_

#include <string>

#include "recipegen/extended/simulator.hpp"
#include "recipegen/nn/ops.hpp"

namespace recipegen::extended {

template <typename T>
struct TextualAttentionOutput {
  Var<T> features;            // [w, u_g, u_a] per position (K x 3d)
  Var<T> ingredient_weights;  // K x M
  Var<T> action_weights;      // K x R
};

// Bilinear word-ingredient and word-action attention.
template <typename T>
class TextualAttention {
 public:
  TextualAttention() = default;
  TextualAttention(nn::ParameterStore<T>& store, const std::string& name, Index hidden, nn::Rng& rng)
      : ing_(store, name + ".ingredient", hidden, rng), act_(store, name + ".action", hidden, rng) {}

  TextualAttentionOutput<T> operator()(nn::Tape<T>& tape, const Var<T>& words, const Var<T>& ingredients,
                                       const Var<T>& actions) const {
    TextualAttentionOutput<T> out;
    out.ingredient_weights = nn::softmax_rows(nn::matmul_nt(ing_(tape, words), ingredients));
    out.action_weights = nn::softmax_rows(nn::matmul_nt(act_(tape, words), actions));
    out.features = nn::concat_cols<T>({words, nn::matmul(out.ingredient_weights, ingredients),
                                       nn::matmul(out.action_weights, actions)});
    return out;
  }

  const Projection<T>& ingredient_map() const { return ing_; }
  const Projection<T>& action_map() const { return act_; }

 private:
  Projection<T> ing_, act_;
};

}  // namespace recipegen::extended

#endif  // RECIPEGEN_EXTENDED_TEXTUAL_ATTENTION_HPP_
