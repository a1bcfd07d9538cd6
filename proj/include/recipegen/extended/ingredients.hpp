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

#ifndef RECIPEGEN_EXTENDED_INGREDIENTS_HPP_
#define RECIPEGEN_EXTENDED_INGREDIENTS_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "recipegen/core/error.hpp"
#include "recipegen/core/text.hpp"
#include "recipegen/core/vocabulary.hpp"
#include "recipegen/nn/layers.hpp"
#include "recipegen/nn/ops.hpp"

namespace recipegen::extended {

using nn::Index;
using nn::Matrix;
using nn::Var;

// Token ids per ingredient name.
inline std::vector<std::vector<int>> ingredient_ids(const std::vector<std::string>& ingredients,
                                                    const Vocabulary& vocab) {
  std::vector<std::vector<int>> out;
  for (const auto& name : ingredients) {
    std::vector<int> ids = vocab.encode(tokenize(name));
    if (ids.empty()) throw ValidationError("ingredient '" + name + "' has no tokens");
    out.push_back(std::move(ids));
  }
  return out;
}

// G^0: per ingredient, the mean word embedding through a ReLU MLP.
template <typename T>
class IngredientEncoder {
 public:
  IngredientEncoder() = default;
  IngredientEncoder(nn::ParameterStore<T>& store, const std::string& name, int vocab_size,
                    Index hidden, nn::Rng& rng)
      : l1_(store, name + ".mlp1", hidden, hidden, rng),
        l2_(store, name + ".mlp2", hidden, hidden, rng) {
    embed_ = &store.add(name + ".embed",
                        nn::normal_init<T>(vocab_size, hidden, 1.0 / std::sqrt(static_cast<double>(hidden)), rng));
  }

  // Mean word embedding per ingredient (M x hidden), before the MLP.
  Var<T> mean_embeddings(nn::Tape<T>& tape, const std::vector<std::vector<int>>& ids) const {
    if (ids.empty()) throw ValidationError("encode_ingredients: empty ingredient list");
    Var<T> table = tape.parameter(*embed_);
    std::vector<Var<T>> rows;
    for (const auto& words : ids) rows.push_back(nn::mean_rows(nn::gather_rows(table, words)));
    return rows.size() == 1 ? rows.front() : nn::concat_rows(rows);
  }

  Var<T> operator()(nn::Tape<T>& tape, const std::vector<std::vector<int>>& ids) const {
    return l2_(tape, nn::relu(l1_(tape, mean_embeddings(tape, ids))));
  }

  nn::Parameter<T>& embedding() const { return *embed_; }
  const nn::Linear<T>& mlp1() const { return l1_; }
  const nn::Linear<T>& mlp2() const { return l2_; }

 private:
  nn::Parameter<T>* embed_ = nullptr;
  nn::Linear<T> l1_, l2_;
};

}  // namespace recipegen::extended

#endif  // RECIPEGEN_EXTENDED_INGREDIENTS_HPP_
