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

#ifndef RECIPEGEN_MODEL_MEMORY_TRANSFORMER_HPP_
#define RECIPEGEN_MODEL_MEMORY_TRANSFORMER_HPP_

#include <string>
#include <vector>

#include "recipegen/nn/layers.hpp"
#include "recipegen/nn/ops.hpp"

namespace recipegen::model {

using nn::Index;
using nn::Matrix;
using nn::Var;

// Per-layer memory slots (slots x hidden) as values, for saving and resuming.
template <typename T>
struct MemoryState {
  std::vector<Matrix<T>> layers;

  static MemoryState zeros(int layers, Index slots, Index hidden) {
    MemoryState s;
    s.layers.assign(static_cast<std::size_t>(layers), Matrix<T>::Zero(slots, hidden));
    return s;
  }
  bool operator==(const MemoryState&) const = default;
};

template <typename T>
std::vector<Var<T>> memory_vars(nn::Tape<T>& tape, const MemoryState<T>& s) {
  std::vector<Var<T>> out;
  for (const auto& m : s.layers) out.push_back(tape.constant(m));
  return out;
}

template <typename T>
MemoryState<T> memory_values(const std::vector<Var<T>>& vars) {
  MemoryState<T> s;
  for (const auto& v : vars) s.layers.push_back(v.value());
  return s;
}

template <typename T>
struct LayerResult {
  Var<T> hidden;
  Var<T> memory;
};

// One recurrent transformer layer. The sequence attends over [memory; sequence];
// the memory then attends over [memory; attended sequence] and is updated by a
// sigmoid gate: M' = (1 - z) * M + z * tanh(W_c [M, C]), z = sigmoid(W_z [M, C]).
template <typename T>
class MemoryTransformerLayer {
 public:
  MemoryTransformerLayer() = default;
  MemoryTransformerLayer(nn::ParameterStore<T>& store, const std::string& name, Index hidden,
                         int heads, Index ff, nn::Rng& rng)
      : self_(store, name + ".attn", hidden, heads, rng),
        ln1_(store, name + ".ln1", hidden),
        ffn_(store, name + ".ffn", hidden, ff, rng),
        ln2_(store, name + ".ln2", hidden),
        mem_attn_(store, name + ".mem_attn", hidden, heads, rng),
        gate_(store, name + ".mem_gate", 2 * hidden, hidden, rng),
        cand_(store, name + ".mem_cand", 2 * hidden, hidden, rng) {}

  // `seq_mask` is an optional (n x n) additive mask among sequence rows;
  // memory columns are always visible.
  LayerResult<T> operator()(nn::Tape<T>& tape, const Var<T>& x, const Var<T>& memory,
                            const Matrix<T>* seq_mask = nullptr) const {
    const Index n = x.rows();
    const Index s = memory.rows();
    Matrix<T> mask;
    if (seq_mask) {
      mask.setZero(n, s + n);
      mask.rightCols(n) = *seq_mask;
    }
    Var<T> keys = nn::concat_rows<T>({memory, x});
    Var<T> a = self_(tape, x, keys, seq_mask ? &mask : nullptr);
    Var<T> h1 = ln1_(tape, nn::add(x, a));
    Var<T> h2 = ln2_(tape, nn::add(h1, ffn_(tape, h1)));

    Var<T> c = mem_attn_(tape, memory, nn::concat_rows<T>({memory, h1}));
    Var<T> mc = nn::concat_cols<T>({memory, c});
    Var<T> z = nn::sigmoid(gate_(tape, mc));
    Var<T> cand = nn::tanh(cand_(tape, mc));
    Var<T> updated = nn::add(nn::sub(memory, nn::mul(z, memory)), nn::mul(z, cand));
    return {h2, updated};
  }

  const nn::MultiHeadAttention<T>& self_attention() const { return self_; }
  const nn::MultiHeadAttention<T>& memory_attention() const { return mem_attn_; }
  const nn::Linear<T>& gate() const { return gate_; }
  const nn::Linear<T>& candidate() const { return cand_; }

 private:
  nn::MultiHeadAttention<T> self_;
  nn::LayerNorm<T> ln1_;
  nn::FeedForward<T> ffn_;
  nn::LayerNorm<T> ln2_;
  nn::MultiHeadAttention<T> mem_attn_;
  nn::Linear<T> gate_, cand_;
};

template <typename T>
struct TransformerResult {
  Var<T> hidden;                 // last layer output
  std::vector<Var<T>> memories;  // updated memory per layer
};

template <typename T>
class MemoryTransformer {
 public:
  MemoryTransformer() = default;
  MemoryTransformer(nn::ParameterStore<T>& store, const std::string& name, int layers,
                    Index hidden, int heads, Index ff, nn::Rng& rng) {
    for (int l = 0; l < layers; ++l)
      layers_.emplace_back(store, name + ".layer" + std::to_string(l), hidden, heads, ff, rng);
  }

  TransformerResult<T> operator()(nn::Tape<T>& tape, const Var<T>& x,
                                  const std::vector<Var<T>>& memories,
                                  const Matrix<T>* seq_mask = nullptr) const {
    if (memories.size() != layers_.size())
      throw nn::ShapeError("memory transformer: expected " + std::to_string(layers_.size()) +
                           " memories, got " + std::to_string(memories.size()));
    TransformerResult<T> out;
    Var<T> h = x;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      LayerResult<T> r = layers_[l](tape, h, memories[l], seq_mask);
      h = r.hidden;
      out.memories.push_back(r.memory);
    }
    out.hidden = h;
    return out;
  }

  int layers() const { return static_cast<int>(layers_.size()); }
  const MemoryTransformerLayer<T>& layer(int l) const { return layers_[static_cast<std::size_t>(l)]; }

 private:
  std::vector<MemoryTransformerLayer<T>> layers_;
};

}  // namespace recipegen::model

#endif  // RECIPEGEN_MODEL_MEMORY_TRANSFORMER_HPP_
