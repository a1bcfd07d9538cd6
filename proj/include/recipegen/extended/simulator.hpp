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

#ifndef RECIPEGEN_EXTENDED_SIMULATOR_HPP_
#define RECIPEGEN_EXTENDED_SIMULATOR_HPP_

#include <cmath>
#include <string>

#include "recipegen/nn/layers.hpp"
#include "recipegen/nn/ops.hpp"

namespace recipegen::extended {

using nn::Index;
using nn::Matrix;
using nn::Var;

template <typename T>
struct CrossAttention {
  Var<T> items;         // event-weighted items (items x hidden)
  Var<T> events;        // item-weighted events (N x hidden)
  Var<T> item_logits;   // items x N, before the softmax
  Var<T> item_weights;  // items x N
  Var<T> event_weights; // N x items
};

template <typename T>
struct SimulatorOutputs {
  CrossAttention<T> action;      // A_h (R x d), H_a (N x d)
  CrossAttention<T> ingredient;  // G_h (M x d), H_g (N x d)
  Var<T> fused;                  // H + H_a + H_g
  Var<T> next_state;             // G^t
};

// Bias-free linear map x W.
template <typename T>
class Projection {
 public:
  Projection() = default;
  Projection(nn::ParameterStore<T>& store, const std::string& name, Index dim, nn::Rng& rng)
      : w_(&store.add(name, nn::xavier_init<T>(dim, dim, rng))) {}
  Var<T> operator()(nn::Tape<T>& tape, const Var<T>& x) const { return nn::matmul(x, tape.parameter(*w_)); }
  nn::Parameter<T>& weight() const { return *w_; }

 private:
  nn::Parameter<T>* w_ = nullptr;
};

// Dot-product attention between an item set (actions or ingredients) and the
// event vectors H, in both directions. Event-side maps are shared by the
// action and ingredient selectors.
template <typename T>
class VisualSimulator {
 public:
  VisualSimulator() = default;
  VisualSimulator(nn::ParameterStore<T>& store, const std::string& name, int num_actions,
                  Index hidden, nn::Rng& rng)
      : hidden_(hidden),
        aq_(store, name + ".action_query", hidden, rng),
        ak_(store, name + ".action_key", hidden, rng),
        av_(store, name + ".action_value", hidden, rng),
        hq_(store, name + ".event_query", hidden, rng),
        hk_(store, name + ".event_key", hidden, rng),
        hv_(store, name + ".event_value", hidden, rng),
        gq_(store, name + ".ingredient_query", hidden, rng),
        gk_(store, name + ".ingredient_key", hidden, rng),
        gv_(store, name + ".ingredient_value", hidden, rng) {
    actions_ = &store.add(name + ".actions",
                          nn::normal_init<T>(num_actions, hidden, 1.0 / std::sqrt(static_cast<double>(hidden)), rng));
  }

  // (A_h, H_a) for the action embedding.
  CrossAttention<T> action_selector(nn::Tape<T>& tape, const Var<T>& actions, const Var<T>& events) const {
    return cross(tape, actions, events, aq_, ak_, av_);
  }

  // (G_h, H_g) for the previous ingredient state.
  CrossAttention<T> ingredient_selector(nn::Tape<T>& tape, const Var<T>& state, const Var<T>& events) const {
    return cross(tape, state, events, gq_, gk_, gv_);
  }

  SimulatorOutputs<T> operator()(nn::Tape<T>& tape, const Var<T>& events, const Var<T>& state) const {
    SimulatorOutputs<T> out;
    out.action = action_selector(tape, tape.parameter(*actions_), events);
    out.ingredient = ingredient_selector(tape, state, events);
    out.fused = fuse_events(events, out.action.events, out.ingredient.events);
    out.next_state = update_ingredients(state, out.ingredient.items, out.action.items);
    return out;
  }

  nn::Parameter<T>& actions() const { return *actions_; }
  Index hidden() const { return hidden_; }
  const Projection<T>& action_query() const { return aq_; }
  const Projection<T>& action_key() const { return ak_; }
  const Projection<T>& action_value() const { return av_; }
  const Projection<T>& event_query() const { return hq_; }
  const Projection<T>& event_key() const { return hk_; }
  const Projection<T>& event_value() const { return hv_; }
  const Projection<T>& ingredient_query() const { return gq_; }
  const Projection<T>& ingredient_key() const { return gk_; }
  const Projection<T>& ingredient_value() const { return gv_; }

  // G^t = G^{t-1} + G_h * repeat(max over action rows of A_h).
  static Var<T> update_ingredients(const Var<T>& state, const Var<T>& weighted, const Var<T>& actions) {
    return nn::add(state, nn::mul_row(weighted, nn::max_rows(actions)));
  }

  static Var<T> fuse_events(const Var<T>& events, const Var<T>& by_action, const Var<T>& by_ingredient) {
    return nn::add(nn::add(events, by_action), by_ingredient);
  }

 private:
  CrossAttention<T> cross(nn::Tape<T>& tape, const Var<T>& items, const Var<T>& events,
                          const Projection<T>& q, const Projection<T>& k, const Projection<T>& v) const {
    const T s = T(1) / std::sqrt(static_cast<T>(hidden_));
    CrossAttention<T> c;
    c.item_logits = nn::scale(nn::matmul_nt(q(tape, items), hk_(tape, events)), s);
    c.item_weights = nn::softmax_rows(c.item_logits);
    c.items = nn::matmul(c.item_weights, hv_(tape, events));
    c.event_weights = nn::softmax_rows(nn::scale(nn::matmul_nt(hq_(tape, events), k(tape, items)), s));
    c.events = nn::matmul(c.event_weights, v(tape, items));
    return c;
  }

  Index hidden_ = 0;
  nn::Parameter<T>* actions_ = nullptr;
  Projection<T> aq_, ak_, av_, hq_, hk_, hv_, gq_, gk_, gv_;
};

}  // namespace recipegen::extended

#endif  // RECIPEGEN_EXTENDED_SIMULATOR_HPP_
