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

#ifndef RECIPEGEN_EVAL_SENTENCE_SCORER_HPP_
#define RECIPEGEN_EVAL_SENTENCE_SCORER_HPP_

#include <string>

#include "recipegen/core/error.hpp"
#include "recipegen/metrics/bleu.hpp"
#include "recipegen/metrics/cider.hpp"
#include "recipegen/metrics/meteor.hpp"

namespace recipegen::eval {

enum class SentenceMetric { kBleu4, kMeteor, kCiderD };

inline std::string metric_name(SentenceMetric m) {
  switch (m) {
    case SentenceMetric::kBleu4: return "bleu4";
    case SentenceMetric::kMeteor: return "meteor";
    case SentenceMetric::kCiderD: return "cider_d";
  }
  return "?";
}

// Binds a sentence metric to the corpus statistics it needs. An empty
// candidate (a generator that emitted EOS first) scores 0.
class SentenceScorer {
 public:
  explicit SentenceScorer(SentenceMetric metric, const metrics::CorpusDF* df = nullptr)
      : metric_(metric), df_(df) {
    if (metric == SentenceMetric::kCiderD && (df == nullptr || df->documents <= 0))
      throw Error("SentenceScorer: cider_d requires document frequencies");
  }

  SentenceMetric metric() const { return metric_; }

  double operator()(const Tokens& candidate, const Tokens& reference) const {
    if (candidate.empty() || reference.empty()) return 0.0;
    switch (metric_) {
      case SentenceMetric::kBleu4: return metrics::bleu4(candidate, {reference});
      case SentenceMetric::kMeteor: return metrics::meteor_lite(candidate, reference);
      case SentenceMetric::kCiderD: return metrics::cider_d(candidate, {reference}, *df_);
    }
    return 0.0;
  }

 private:
  SentenceMetric metric_;
  const metrics::CorpusDF* df_;
};

}  // namespace recipegen::eval

#endif  // RECIPEGEN_EVAL_SENTENCE_SCORER_HPP_
