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

#ifndef RECIPEGEN_METRICS_CIDER_HPP_
#define RECIPEGEN_METRICS_CIDER_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "recipegen/core/error.hpp"
#include "recipegen/metrics/ngram.hpp"

namespace recipegen::metrics {

// Document frequencies for CIDEr-D. One document is the reference set of one
// video.
struct CorpusDF {
  std::array<std::map<NGram, int>, kMaxOrder> df;
  int documents = 0;

  int frequency(int n, const NGram& gram) const {
    const auto& m = df[static_cast<std::size_t>(n - 1)];
    auto it = m.find(gram);
    return it == m.end() ? 0 : it->second;
  }
};

inline CorpusDF build_df(const std::vector<std::vector<Tokens>>& references_per_video) {
  CorpusDF out;
  for (const auto& refs : references_per_video) {
    ++out.documents;
    for (int n = 1; n <= kMaxOrder; ++n) {
      std::set<NGram> seen;
      for (const auto& r : refs) {
        const NGramProfile p = ngram_profile(r);
        for (const auto& [gram, count] : p.order(n)) seen.insert(gram);
      }
      for (const auto& gram : seen) ++out.df[static_cast<std::size_t>(n - 1)][gram];
    }
  }
  return out;
}

inline double cider_length_penalty(double candidate_len, double reference_len, double sigma) {
  const double delta = candidate_len - reference_len;
  return std::exp(-(delta * delta) / (2.0 * sigma * sigma));
}

namespace detail {

struct TfIdf {
  std::array<std::map<NGram, double>, kMaxOrder> vec;
  std::array<double, kMaxOrder> norm{};
  double length = 0;
};

inline TfIdf tfidf(const Tokens& sentence, const CorpusDF& df) {
  TfIdf out;
  const NGramProfile p = ngram_profile(sentence);
  const double log_docs = std::log(static_cast<double>(df.documents));
  for (int n = 1; n <= kMaxOrder; ++n) {
    const auto k = static_cast<std::size_t>(n - 1);
    for (const auto& [gram, count] : p.order(n)) {
      const double idf = log_docs - std::log(std::max(1.0, double(df.frequency(n, gram))));
      const double v = count * idf;
      out.vec[k][gram] = v;
      out.norm[k] += v * v;
    }
    out.norm[k] = std::sqrt(out.norm[k]);
  }
  out.length = static_cast<double>(sentence.size());
  return out;
}

}  // namespace detail

// CIDEr-D: clipped TF-IDF cosine per n-gram order with a Gaussian length
// penalty, averaged over orders 1..4 and references, scaled by 10.
inline double cider_d(const Tokens& candidate, const std::vector<Tokens>& references,
                      const CorpusDF& df, double sigma = 6.0) {
  if (df.documents <= 0) throw Error("cider_d: document frequencies missing");
  if (references.empty()) throw Error("cider_d: empty reference list");
  const detail::TfIdf cand = detail::tfidf(candidate, df);
  double total = 0.0;
  for (const auto& ref_tokens : references) {
    const detail::TfIdf ref = detail::tfidf(ref_tokens, df);
    double score = 0.0;
    for (std::size_t k = 0; k < kMaxOrder; ++k) {
      double dot = 0.0;
      for (const auto& [gram, v] : cand.vec[k]) {
        auto it = ref.vec[k].find(gram);
        if (it != ref.vec[k].end()) dot += std::min(v, it->second) * it->second;
      }
      if (cand.norm[k] != 0.0 && ref.norm[k] != 0.0) dot /= cand.norm[k] * ref.norm[k];
      score += dot * cider_length_penalty(cand.length, ref.length, sigma);
    }
    total += score / kMaxOrder;
  }
  return 10.0 * total / static_cast<double>(references.size());
}

}  // namespace recipegen::metrics

#endif  // RECIPEGEN_METRICS_CIDER_HPP_
