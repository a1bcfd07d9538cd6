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

#ifndef RECIPEGEN_EXTENDED_LOSSES_HPP_
#define RECIPEGEN_EXTENDED_LOSSES_HPP_

#include <string>
#include <vector>

#include "recipegen/core/error.hpp"
#include "recipegen/core/vocabulary.hpp"
#include "recipegen/extended/labels.hpp"
#include "recipegen/nn/ops.hpp"

namespace recipegen::extended {

using nn::Index;
using nn::Matrix;
using nn::Var;

enum class Negatives { kSkip, kNullEvent };

namespace detail {

// Adds -log softmax(row i)[event] for labeled rows. With null-event
// negatives, a zero logit column is appended and unlabeled rows target it.
template <typename T>
Var<T> item_event_nll(nn::Tape<T>& tape, Var<T> total, const Var<T>& logits, const std::vector<int>& labels,
                      int event, Negatives negatives, const char* what) {
  if (static_cast<Index>(labels.size()) != logits.rows())
    throw ValidationError(std::string("loss_vsim: ") + what + " labels have " + std::to_string(labels.size()) +
                          " items, logits have " + std::to_string(logits.rows()));
  if (event < 0 || event >= logits.cols())
    throw ValidationError(std::string("loss_vsim: event ") + std::to_string(event) + " out of range");
  bool any = false;
  for (int l : labels) any = any || l != 0;
  if (!any && negatives == Negatives::kSkip) return total;
  Var<T> z = logits;
  if (negatives == Negatives::kNullEvent)
    z = nn::concat_cols<T>({logits, tape.constant(Matrix<T>::Zero(logits.rows(), 1))});
  Var<T> lp = nn::log_softmax_rows(z);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0) {
      total = nn::sub(total, nn::pick(lp, static_cast<Index>(i), event));
    } else if (negatives == Negatives::kNullEvent) {
      total = nn::sub(total, nn::pick(lp, static_cast<Index>(i), logits.cols()));
    }
  }
  return total;
}

}  // namespace detail

// Per step t: action logits (R x N) and ingredient logits (M x N) from the
// simulator; each labeled item adds the NLL of the step's oracle event under a
// softmax over events.
template <typename T>
Var<T> loss_vsim(nn::Tape<T>& tape, const std::vector<Var<T>>& action_logits,
                 const std::vector<Var<T>>& ingredient_logits, const DistantLabels& labels,
                 Negatives negatives = Negatives::kSkip) {
  const std::size_t steps = labels.events.size();
  if (action_logits.size() != steps || ingredient_logits.size() != steps || labels.actions.size() != steps ||
      labels.ingredients.size() != steps)
    throw ValidationError("loss_vsim: step count mismatch");
  Var<T> total = tape.constant(Matrix<T>::Zero(1, 1));
  for (std::size_t t = 0; t < steps; ++t) {
    total = detail::item_event_nll(tape, total, action_logits[t], labels.actions[t], labels.events[t], negatives,
                                   "action");
    total = detail::item_event_nll(tape, total, ingredient_logits[t], labels.ingredients[t], labels.events[t],
                                   negatives, "ingredient");
  }
  return total;
}

// For every target position whose token is an ingredient head word (or an
// action word), adds -log of that item's attention weight at the position.
template <typename T>
Var<T> loss_tattn(nn::Tape<T>& tape, const std::vector<Var<T>>& ingredient_weights,
                  const std::vector<Var<T>>& action_weights, const std::vector<std::vector<int>>& targets,
                  const std::vector<int>& ingredient_heads, const std::vector<int>& action_ids) {
  if (ingredient_weights.size() != targets.size() || action_weights.size() != targets.size())
    throw ValidationError("loss_tattn: step count mismatch");
  Var<T> total = tape.constant(Matrix<T>::Zero(1, 1));
  auto add_terms = [&](const Var<T>& alpha, const std::vector<int>& tokens, const std::vector<int>& items) {
    if (alpha.cols() != static_cast<Index>(items.size()) || alpha.rows() != static_cast<Index>(tokens.size()))
      throw ValidationError("loss_tattn: attention shape does not match tokens/items");
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      if (tokens[k] < Vocabulary::kNumReserved) continue;
      for (std::size_t m = 0; m < items.size(); ++m)
        if (items[m] == tokens[k])
          total = nn::sub(total, nn::log(nn::pick(alpha, static_cast<Index>(k), static_cast<Index>(m))));
    }
  };
  for (std::size_t t = 0; t < targets.size(); ++t) {
    add_terms(ingredient_weights[t], targets[t], ingredient_heads);
    add_terms(action_weights[t], targets[t], action_ids);
  }
  return total;
}

template <typename T>
Var<T> loss_extended(const Var<T>& total, const Var<T>& vsim, const Var<T>& tattn) {
  return nn::add(nn::add(total, vsim), tattn);
}

}  // namespace recipegen::extended

#endif  // RECIPEGEN_EXTENDED_LOSSES_HPP_
