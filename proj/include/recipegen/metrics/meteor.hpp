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

#ifndef RECIPEGEN_METRICS_METEOR_HPP_
#define RECIPEGEN_METRICS_METEOR_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include "recipegen/core/error.hpp"
#include "recipegen/core/types.hpp"

namespace recipegen::metrics {

// Exact-match alignment used by meteor_lite. `ref_pos[i]` is the reference
// position aligned to candidate token i, or -1.
struct ExactAlignment {
  std::vector<int> ref_pos;
  int matches = 0;
  int chunks = 0;
};

// Greedy left-to-right: each candidate token takes the earliest unused
// identical reference token. This reaches the maximum matching count for
// exact matches.
inline ExactAlignment align_exact(const Tokens& candidate, const Tokens& reference) {
  ExactAlignment a;
  a.ref_pos.assign(candidate.size(), -1);
  std::vector<bool> used(reference.size(), false);
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    for (std::size_t j = 0; j < reference.size(); ++j) {
      if (!used[j] && reference[j] == candidate[i]) {
        used[j] = true;
        a.ref_pos[i] = static_cast<int>(j);
        ++a.matches;
        break;
      }
    }
  }
  int prev = -2;
  bool in_chunk = false;
  for (int pos : a.ref_pos) {
    if (pos < 0) {
      in_chunk = false;
      continue;
    }
    if (!in_chunk || pos != prev + 1) ++a.chunks;
    in_chunk = true;
    prev = pos;
  }
  return a;
}

// METEOR restricted to exact unigram matches (no stemming or synonymy):
// Fmean = 10PR / (R + 9P), penalty = 0.5 (chunks / m)^3.
inline double meteor_lite(const Tokens& candidate, const Tokens& reference) {
  if (candidate.empty() || reference.empty()) throw Error("meteor_lite: empty sentence");
  const ExactAlignment a = align_exact(candidate, reference);
  if (a.matches == 0) return 0.0;
  const double m = a.matches;
  const double p = m / static_cast<double>(candidate.size());
  const double r = m / static_cast<double>(reference.size());
  const double fmean = 10.0 * p * r / (r + 9.0 * p);
  const double penalty = 0.5 * std::pow(a.chunks / m, 3.0);
  return fmean * (1.0 - penalty);
}

}  // namespace recipegen::metrics

#endif  // RECIPEGEN_METRICS_METEOR_HPP_
