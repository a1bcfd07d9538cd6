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

#ifndef RECIPEGEN_EVAL_DVC_EVAL_HPP_
#define RECIPEGEN_EVAL_DVC_EVAL_HPP_

#include <span>
#include <vector>

#include "recipegen/core/types.hpp"
#include "recipegen/eval/sentence_scorer.hpp"
#include "recipegen/eval/tiou.hpp"

namespace recipegen::eval {

inline constexpr double kDvcThresholds[] = {0.3, 0.5, 0.7, 0.9};

// Mean sentence score over prediction/ground-truth pairs whose tIoU strictly
// exceeds `theta`; 0 when no pair qualifies.
inline double dvc_eval_at(const PredictionRecipe& pred, const GroundTruthRecipe& gt,
                          const SentenceScorer& scorer, double theta) {
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (const auto& step : gt.steps) {
      if (tiou(pred.intervals[i], step.interval) > theta) {
        sum += scorer(pred.sentences[i], step.sentence);
        ++count;
      }
    }
  }
  return count ? sum / count : 0.0;
}

inline double dvc_eval(const PredictionRecipe& pred, const GroundTruthRecipe& gt,
                       const SentenceScorer& scorer,
                       std::span<const double> thresholds = kDvcThresholds) {
  double total = 0.0;
  for (double theta : thresholds) total += dvc_eval_at(pred, gt, scorer, theta);
  return thresholds.empty() ? 0.0 : total / static_cast<double>(thresholds.size());
}

}  // namespace recipegen::eval

#endif  // RECIPEGEN_EVAL_DVC_EVAL_HPP_
