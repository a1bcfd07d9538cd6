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

#ifndef RECIPEGEN_EVAL_SODA_HPP_
#define RECIPEGEN_EVAL_SODA_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "recipegen/core/error.hpp"
#include "recipegen/core/types.hpp"
#include "recipegen/eval/sentence_scorer.hpp"
#include "recipegen/eval/tiou.hpp"

namespace recipegen::eval {

// Pairwise story scores: rows are predicted events, columns ground truth.
class ScoreMatrix {
 public:
  ScoreMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  void validate() const {
    for (double v : data_)
      if (!std::isfinite(v) || v < 0.0) throw ValidationError("ScoreMatrix: entry not finite and >= 0");
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

// Order-preserving one-to-one matching, strictly increasing in both indices.
struct Alignment {
  std::vector<std::pair<int, int>> pairs;
  double total = 0.0;
};

// Maximum-total monotone matching by dynamic programming:
// M[i][j] = max(M[i-1][j], M[i][j-1], M[i-1][j-1] + S[i-1][j-1]).
inline Alignment align_max(const ScoreMatrix& s) {
  const std::size_t p = s.rows(), g = s.cols();
  std::vector<double> m((p + 1) * (g + 1), 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return m[i * (g + 1) + j]; };
  for (std::size_t i = 1; i <= p; ++i)
    for (std::size_t j = 1; j <= g; ++j)
      at(i, j) = std::max({at(i - 1, j), at(i, j - 1), at(i - 1, j - 1) + s(i - 1, j - 1)});

  Alignment a;
  a.total = at(p, g);
  std::size_t i = p, j = g;
  while (i > 0 && j > 0) {
    if (at(i, j) == at(i - 1, j)) {
      --i;
    } else if (at(i, j) == at(i, j - 1)) {
      --j;
    } else {
      a.pairs.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1));
      --i;
      --j;
    }
  }
  std::reverse(a.pairs.begin(), a.pairs.end());
  return a;
}

struct SodaScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Alignment alignment;
};

inline SodaScore soda_from_matrix(const ScoreMatrix& s) {
  SodaScore out;
  out.alignment = align_max(s);
  if (s.rows() > 0) out.precision = out.alignment.total / static_cast<double>(s.rows());
  if (s.cols() > 0) out.recall = out.alignment.total / static_cast<double>(s.cols());
  const double denom = out.precision + out.recall;
  out.f1 = denom > 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
  return out;
}

// Story score tIoU x sentence metric, or tIoU alone (SODA-tIoU) when no
// scorer is given.
inline ScoreMatrix story_scores(const PredictionRecipe& pred, const GroundTruthRecipe& gt,
                                const SentenceScorer* scorer) {
  ScoreMatrix s(pred.size(), gt.steps.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < gt.steps.size(); ++j) {
      const double t = tiou(pred.intervals[i], gt.steps[j].interval);
      if (t <= 0.0) continue;
      s(i, j) = scorer ? t * (*scorer)(pred.sentences[i], gt.steps[j].sentence) : t;
    }
  }
  return s;
}

inline SodaScore soda(const PredictionRecipe& pred, const GroundTruthRecipe& gt,
                      const SentenceScorer& scorer) {
  return soda_from_matrix(story_scores(pred, gt, &scorer));
}

inline SodaScore soda_tiou(const PredictionRecipe& pred, const GroundTruthRecipe& gt) {
  return soda_from_matrix(story_scores(pred, gt, nullptr));
}

}  // namespace recipegen::eval

#endif  // RECIPEGEN_EVAL_SODA_HPP_
