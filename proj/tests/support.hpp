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

#ifndef RECIPEGEN_TESTS_SUPPORT_HPP_
#define RECIPEGEN_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "recipegen/core/types.hpp"

namespace testing_support {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline recipegen::Tokens random_sentence(Rng& rng, int vocab, int min_len, int max_len) {
  recipegen::Tokens out;
  const int n = uniform_int(rng, min_len, max_len);
  for (int i = 0; i < n; ++i) out.push_back("w" + std::to_string(uniform_int(rng, 0, vocab - 1)));
  return out;
}

inline recipegen::TimedEvent random_interval(Rng& rng, double duration) {
  double a = uniform(rng, 0.0, duration), b = uniform(rng, 0.0, duration);
  if (a > b) std::swap(a, b);
  if (b - a < 1e-3) b = a + 1e-3;
  return {a, b};
}

inline recipegen::EventCandidateSet random_candidates(Rng& rng, int n, double duration, int dim) {
  std::vector<recipegen::Candidate> cands;
  for (int i = 0; i < n; ++i) {
    recipegen::Candidate c;
    c.interval = random_interval(rng, duration);
    for (int k = 0; k < dim; ++k) c.feature.push_back(uniform(rng, -1.0, 1.0));
    cands.push_back(std::move(c));
  }
  std::stable_sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    return a.interval.start < b.interval.start;
  });
  for (int i = 0; i < n; ++i) cands[static_cast<std::size_t>(i)].rank = i;
  return {cands};
}

inline std::vector<recipegen::RecipeStep> random_steps(Rng& rng, int n, double duration) {
  std::vector<double> cuts;
  for (int i = 0; i < 2 * n; ++i) cuts.push_back(uniform(rng, 0.0, duration));
  std::sort(cuts.begin(), cuts.end());
  std::vector<recipegen::RecipeStep> steps;
  for (int i = 0; i < n; ++i) {
    double a = cuts[static_cast<std::size_t>(2 * i)], b = cuts[static_cast<std::size_t>(2 * i + 1)];
    if (b - a < 1e-3) b = a + 1e-3;
    steps.push_back({{a, b}, random_sentence(rng, 12, 1, 8)});
  }
  return steps;
}

inline recipegen::DatasetRecord random_record(Rng& rng, const std::string& id) {
  recipegen::DatasetRecord r;
  r.video_id = id;
  r.duration = uniform(rng, 30.0, 300.0);
  r.candidates = random_candidates(rng, uniform_int(rng, 1, 8), r.duration, uniform_int(rng, 1, 4));
  r.steps = random_steps(rng, uniform_int(rng, 1, 6), r.duration);
  const int m = uniform_int(rng, 0, 3);
  for (int i = 0; i < m; ++i) r.ingredients.push_back("i" + std::to_string(i));
  return r;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("recipegen_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing_support

#endif  // RECIPEGEN_TESTS_SUPPORT_HPP_
