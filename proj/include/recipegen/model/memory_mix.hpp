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

#ifndef RECIPEGEN_MODEL_MEMORY_MIX_HPP_
#define RECIPEGEN_MODEL_MEMORY_MIX_HPP_

#include <string>
#include <utility>
#include <vector>

#include "recipegen/nn/layers.hpp"
#include "recipegen/nn/ops.hpp"

namespace recipegen::model {

using nn::Var;

// V' = f1(V) * sigmoid(g2(g1(S))), S' = g1(S) * sigmoid(f2(f1(V))), applied
// per layer with maps shared across layers.
template <typename T>
class MemoryMixer {
 public:
  MemoryMixer() = default;
  MemoryMixer(nn::ParameterStore<T>& store, const std::string& name, nn::Index hidden, nn::Rng& rng)
      : f1_(store, name + ".f1", hidden, hidden, rng),
        f2_(store, name + ".f2", hidden, hidden, rng),
        g1_(store, name + ".g1", hidden, hidden, rng),
        g2_(store, name + ".g2", hidden, hidden, rng) {}

  std::pair<Var<T>, Var<T>> mix(nn::Tape<T>& tape, const Var<T>& v, const Var<T>& s) const {
    Var<T> fv = f1_(tape, v);
    Var<T> gs = g1_(tape, s);
    return {nn::mul(fv, nn::sigmoid(g2_(tape, gs))), nn::mul(gs, nn::sigmoid(f2_(tape, fv)))};
  }

  std::pair<std::vector<Var<T>>, std::vector<Var<T>>> operator()(nn::Tape<T>& tape,
                                                                 const std::vector<Var<T>>& v,
                                                                 const std::vector<Var<T>>& s) const {
    if (v.size() != s.size()) throw nn::ShapeError("mix_memories: layer count mismatch");
    std::pair<std::vector<Var<T>>, std::vector<Var<T>>> out;
    for (std::size_t l = 0; l < v.size(); ++l) {
      auto [a, b] = mix(tape, v[l], s[l]);
      out.first.push_back(a);
      out.second.push_back(b);
    }
    return out;
  }

  const nn::Linear<T>& f1() const { return f1_; }
  const nn::Linear<T>& f2() const { return f2_; }
  const nn::Linear<T>& g1() const { return g1_; }
  const nn::Linear<T>& g2() const { return g2_; }

 private:
  nn::Linear<T> f1_, f2_, g1_, g2_;
};

}  // namespace recipegen::model

#endif  // RECIPEGEN_MODEL_MEMORY_MIX_HPP_
