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

#ifndef RECIPEGEN_EVAL_COUNT_STATS_HPP_
#define RECIPEGEN_EVAL_COUNT_STATS_HPP_

#include <cstdlib>
#include <map>
#include <utility>
#include <vector>

#include "recipegen/core/error.hpp"

namespace recipegen::eval {

// Percentage of (predicted count, ground-truth count) pairs with
// |p - q| <= eta, for each eta.
inline std::map<int, double> event_count_stats(const std::vector<std::pair<int, int>>& pairs,
                                               const std::vector<int>& etas) {
  if (etas.empty()) throw Error("event_count_stats: empty eta list");
  std::map<int, double> out;
  for (int eta : etas) {
    if (eta < 0) throw Error("event_count_stats: negative eta");
    int hits = 0;
    for (const auto& [p, q] : pairs)
      if (std::abs(p - q) <= eta) ++hits;
    out[eta] = pairs.empty() ? 0.0 : 100.0 * hits / static_cast<double>(pairs.size());
  }
  return out;
}

}  // namespace recipegen::eval

#endif  // RECIPEGEN_EVAL_COUNT_STATS_HPP_
