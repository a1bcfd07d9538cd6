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

#ifndef RECIPEGEN_MODEL_LOSSES_HPP_
#define RECIPEGEN_MODEL_LOSSES_HPP_

#include <string>
#include <vector>

#include "recipegen/core/error.hpp"
#include "recipegen/core/vocabulary.hpp"
#include "recipegen/nn/ops.hpp"

namespace recipegen::model {

using nn::Var;

// -sum_t log p_t(label_t); one 1 x (N + 1) log-probability row per step.
template <typename T>
Var<T> loss_event(nn::Tape<T>& tape, const std::vector<Var<T>>& log_probs, const std::vector<int>& labels) {
  if (log_probs.size() != labels.size())
    throw ValidationError("loss_event: " + std::to_string(log_probs.size()) + " steps but " +
                          std::to_string(labels.size()) + " labels");
  Var<T> total = tape.constant(nn::Matrix<T>::Zero(1, 1));
  for (std::size_t t = 0; t < labels.size(); ++t) {
    if (labels[t] < 0 || labels[t] >= log_probs[t].cols())
      throw ValidationError("loss_event: label " + std::to_string(labels[t]) + " out of range at step " +
                            std::to_string(t));
    total = nn::sub(total, nn::pick(log_probs[t], 0, labels[t]));
  }
  return total;
}

// Token NLL over one (K x W) log-probability block; PAD targets are skipped.
template <typename T>
Var<T> loss_sentence(nn::Tape<T>& tape, const Var<T>& log_probs, const std::vector<int>& targets) {
  if (static_cast<nn::Index>(targets.size()) != log_probs.rows())
    throw ValidationError("loss_sentence: " + std::to_string(targets.size()) + " targets for " +
                          std::to_string(log_probs.rows()) + " distributions");
  Var<T> total = tape.constant(nn::Matrix<T>::Zero(1, 1));
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (targets[k] == Vocabulary::kPad) continue;
    if (targets[k] < 0 || targets[k] >= log_probs.cols())
      throw ValidationError("loss_sentence: token id " + std::to_string(targets[k]) + " out of range");
    total = nn::sub(total, nn::pick(log_probs, static_cast<nn::Index>(k), targets[k]));
  }
  return total;
}

template <typename T>
Var<T> loss_total(const Var<T>& event, const Var<T>& sentence) {
  return nn::add(event, sentence);
}

}  // namespace recipegen::model

#endif  // RECIPEGEN_MODEL_LOSSES_HPP_
