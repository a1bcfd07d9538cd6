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

#ifndef RECIPEGEN_CORE_TYPES_HPP_
#define RECIPEGEN_CORE_TYPES_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace recipegen {

using Tokens = std::vector<std::string>;

inline constexpr std::size_t kDefaultMaxSentenceLen = 20;
inline constexpr std::size_t kDefaultMaxSteps = 12;

// A closed interval on the time axis, in seconds.
struct TimedEvent {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  bool operator==(const TimedEvent&) const = default;
};

// One proposal from an upstream detector. `rank` is the generation order and
// defines nested candidate subsets; `sentence` is an optional caption attached
// by the upstream model.
struct Candidate {
  TimedEvent interval;
  std::vector<double> feature;
  int rank = 0;
  Tokens sentence;

  bool operator==(const Candidate&) const = default;
};

// Candidates sorted by start time. All features share one dimension.
struct EventCandidateSet {
  std::vector<Candidate> candidates;

  std::size_t size() const { return candidates.size(); }
  bool empty() const { return candidates.empty(); }
  const Candidate& operator[](std::size_t i) const { return candidates[i]; }
  std::size_t feature_dim() const {
    return candidates.empty() ? 0 : candidates.front().feature.size();
  }
  std::vector<TimedEvent> intervals() const {
    std::vector<TimedEvent> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) out.push_back(c.interval);
    return out;
  }
  bool operator==(const EventCandidateSet&) const = default;
};

struct RecipeStep {
  TimedEvent interval;
  Tokens sentence;

  bool operator==(const RecipeStep&) const = default;
};

struct GroundTruthRecipe {
  std::string video_id;
  double duration = 0.0;
  std::vector<RecipeStep> steps;
  std::vector<std::string> ingredients;

  bool operator==(const GroundTruthRecipe&) const = default;
};

// One video of a dataset file.
struct DatasetRecord {
  std::string video_id;
  double duration = 0.0;
  EventCandidateSet candidates;
  std::vector<RecipeStep> steps;
  std::vector<std::string> ingredients;

  GroundTruthRecipe ground_truth() const {
    return GroundTruthRecipe{video_id, duration, steps, ingredients};
  }
  bool operator==(const DatasetRecord&) const = default;
};

// Ordered (candidate index, sentence) pairs produced for one video.
struct PredictionRecipe {
  std::string video_id;
  std::vector<int> selections;
  std::vector<Tokens> sentences;
  std::vector<TimedEvent> intervals;

  std::size_t size() const { return selections.size(); }
  bool operator==(const PredictionRecipe&) const = default;
};

}  // namespace recipegen

#endif  // RECIPEGEN_CORE_TYPES_HPP_
