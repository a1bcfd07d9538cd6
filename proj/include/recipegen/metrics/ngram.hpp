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

#ifndef RECIPEGEN_METRICS_NGRAM_HPP_
#define RECIPEGEN_METRICS_NGRAM_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "recipegen/core/types.hpp"

namespace recipegen::metrics {

inline constexpr int kMaxOrder = 4;

using NGram = std::vector<std::string>;
using NGramCounts = std::map<NGram, int>;

// Per-order n-gram multisets of one sentence; index 0 holds unigrams.
struct NGramProfile {
  std::array<NGramCounts, kMaxOrder> counts;
  std::size_t length = 0;

  const NGramCounts& order(int n) const { return counts[static_cast<std::size_t>(n - 1)]; }

  // max(0, length - n + 1)
  std::size_t total(int n) const {
    return length + 1 > static_cast<std::size_t>(n) ? length - static_cast<std::size_t>(n) + 1 : 0;
  }
};

inline NGramProfile ngram_profile(const Tokens& tokens) {
  NGramProfile p;
  p.length = tokens.size();
  for (int n = 1; n <= kMaxOrder; ++n) {
    auto& counts = p.counts[static_cast<std::size_t>(n - 1)];
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i)
      ++counts[NGram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                     tokens.begin() + static_cast<std::ptrdiff_t>(i) + n)];
  }
  return p;
}

}  // namespace recipegen::metrics

#endif  // RECIPEGEN_METRICS_NGRAM_HPP_
