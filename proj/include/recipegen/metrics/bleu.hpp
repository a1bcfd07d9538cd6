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

#ifndef RECIPEGEN_METRICS_BLEU_HPP_
#define RECIPEGEN_METRICS_BLEU_HPP_

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "recipegen/core/error.hpp"
#include "recipegen/metrics/ngram.hpp"

namespace recipegen::metrics {

// Sentence-level BLEU-4 with uniform weights. Orders n >= 2 use add-one
// smoothing on both the clipped match count and the candidate n-gram count;
// unigram precision is unsmoothed. The brevity penalty uses the reference
// length closest to the candidate length (shorter wins ties).
inline double bleu4(const Tokens& candidate, const std::vector<Tokens>& references) {
  if (references.empty()) throw Error("bleu4: empty reference list");
  if (candidate.empty()) throw Error("bleu4: empty candidate");
  const NGramProfile cand = ngram_profile(candidate);
  std::vector<NGramProfile> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(ngram_profile(r));

  double log_sum = 0.0;
  for (int n = 1; n <= kMaxOrder; ++n) {
    double matches = 0.0;
    for (const auto& [gram, count] : cand.order(n)) {
      int max_ref = 0;
      for (const auto& r : refs) {
        auto it = r.order(n).find(gram);
        if (it != r.order(n).end()) max_ref = std::max(max_ref, it->second);
      }
      matches += std::min(count, max_ref);
    }
    double total = static_cast<double>(cand.total(n));
    if (n >= 2) {
      matches += 1.0;
      total += 1.0;
    }
    if (matches == 0.0) return 0.0;
    log_sum += std::log(matches / total);
  }

  const auto c = static_cast<long>(candidate.size());
  long r = static_cast<long>(references.front().size());
  for (const auto& ref : references) {
    const long len = static_cast<long>(ref.size());
    if (std::labs(len - c) < std::labs(r - c) || (std::labs(len - c) == std::labs(r - c) && len < r))
      r = len;
  }
  const double bp = c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
  return bp * std::exp(log_sum / kMaxOrder);
}

}  // namespace recipegen::metrics

#endif  // RECIPEGEN_METRICS_BLEU_HPP_
