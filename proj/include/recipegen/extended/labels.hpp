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

#ifndef RECIPEGEN_EXTENDED_LABELS_HPP_
#define RECIPEGEN_EXTENDED_LABELS_HPP_

#include <string>
#include <vector>

#include "recipegen/core/error.hpp"
#include "recipegen/core/text.hpp"
#include "recipegen/core/types.hpp"
#include "recipegen/core/vocabulary.hpp"

namespace recipegen::extended {

// Per gt step: 0/1 rows over the video's ingredients and the action lexicon,
// attached to the step's oracle candidate.
struct DistantLabels {
  std::vector<std::vector<int>> ingredients;  // steps x M
  std::vector<std::vector<int>> actions;      // steps x R
  std::vector<int> events;                    // oracle candidate per step

  bool operator==(const DistantLabels&) const = default;
};

inline DistantLabels distant_labels(const GroundTruthRecipe& gt, const std::vector<int>& oracle_events,
                                    const std::vector<std::string>& lexicon) {
  if (lexicon.empty()) throw ValidationError("distant_labels: empty action lexicon");
  if (oracle_events.size() != gt.steps.size())
    throw ValidationError("distant_labels: " + std::to_string(oracle_events.size()) + " oracle indices for " +
                          std::to_string(gt.steps.size()) + " steps");
  std::vector<Tokens> ing, act;
  for (const auto& s : gt.ingredients) ing.push_back(tokenize(s));
  for (const auto& s : lexicon) act.push_back(tokenize(s));
  DistantLabels out;
  out.events = oracle_events;
  for (const auto& step : gt.steps) {
    std::vector<int> gi, ga;
    for (const auto& t : ing) gi.push_back(!t.empty() && contains_run(step.sentence, t) ? 1 : 0);
    for (const auto& t : act) ga.push_back(!t.empty() && contains_run(step.sentence, t) ? 1 : 0);
    out.ingredients.push_back(std::move(gi));
    out.actions.push_back(std::move(ga));
  }
  return out;
}

// Vocabulary id of each item's last word (UNK when absent or empty).
inline std::vector<int> head_word_ids(const std::vector<std::string>& items, const Vocabulary& vocab) {
  std::vector<int> out;
  for (const auto& s : items) {
    const Tokens t = tokenize(s);
    out.push_back(t.empty() ? Vocabulary::kUnk : vocab.id(t.back()));
  }
  return out;
}

}  // namespace recipegen::extended

#endif  // RECIPEGEN_EXTENDED_LABELS_HPP_
