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

#ifndef RECIPEGEN_MODEL_GENERATOR_HPP_
#define RECIPEGEN_MODEL_GENERATOR_HPP_

#include <string>
#include <vector>

#include "recipegen/model/memory_transformer.hpp"
#include "recipegen/nn/layers.hpp"
#include "recipegen/nn/ops.hpp"

namespace recipegen::model {

// Additive mask for [prefix; words]: prefix rows see the prefix, word i sees
// the prefix and words 0..i.
template <typename T>
Matrix<T> prefix_causal_mask(Index prefix, Index words) {
  const Index n = prefix + words;
  Matrix<T> m = Matrix<T>::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = prefix; j < n; ++j)
      if (i < prefix || j - prefix > i - prefix) m(i, j) = nn::neg_infinity<T>();
  return m;
}

template <typename T>
struct GeneratorPass {
  Var<T> words;                  // hidden state per word position
  std::vector<Var<T>> memories;  // updated sentence memory
};

// Word vectors are relu(adapter(embedding)) + h_selected + PE; an optional
// prefix block (ingredient vectors) is prepended without position encoding.
template <typename T>
class SentenceGenerator {
 public:
  SentenceGenerator() = default;
  SentenceGenerator(nn::ParameterStore<T>& store, const std::string& name, int vocab_size,
                    Index hidden, int layers, int heads, Index ff, nn::Rng& rng)
      : hidden_(hidden),
        adapter_(store, name + ".adapter", hidden, hidden, rng),
        transformer_(store, name, layers, hidden, heads, ff, rng) {
    embed_ = &store.add(name + ".embed",
                        nn::normal_init<T>(vocab_size, hidden, 1.0 / std::sqrt(static_cast<double>(hidden)), rng));
  }

  GeneratorPass<T> operator()(nn::Tape<T>& tape, const std::vector<int>& ids, const Var<T>& selected,
                              const std::vector<Var<T>>& memories,
                              const Var<T>* prefix = nullptr) const {
    const auto k = static_cast<Index>(ids.size());
    Var<T> w = nn::relu(adapter_(tape, nn::gather_rows(tape.parameter(*embed_), ids)));
    w = nn::add_row(w, selected);
    w = nn::add(w, tape.constant(nn::sinusoidal_encoding<T>(k, hidden_)));
    const Index p = prefix ? prefix->rows() : 0;
    const Matrix<T> mask = prefix_causal_mask<T>(p, k);
    Var<T> x = prefix ? nn::concat_rows<T>({*prefix, w}) : w;
    TransformerResult<T> r = transformer_(tape, x, memories, &mask);
    return {p ? nn::slice_rows(r.hidden, p, k) : r.hidden, r.memories};
  }

  nn::Parameter<T>& embedding() const { return *embed_; }
  const nn::Linear<T>& adapter() const { return adapter_; }
  const MemoryTransformer<T>& transformer() const { return transformer_; }

 private:
  Index hidden_ = 0;
  nn::Parameter<T>* embed_ = nullptr;
  nn::Linear<T> adapter_;
  MemoryTransformer<T> transformer_;
};

}  // namespace recipegen::model

#endif  // RECIPEGEN_MODEL_GENERATOR_HPP_
