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

#ifndef RECIPEGEN_HARNESS_DATA_HPP_
#define RECIPEGEN_HARNESS_DATA_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "recipegen/core/dataset_io.hpp"
#include "recipegen/core/hash.hpp"
#include "recipegen/core/text.hpp"
#include "recipegen/core/types.hpp"
#include "recipegen/core/vocabulary.hpp"
#include "recipegen/oracle/oracle.hpp"

namespace recipegen::harness {

struct Split {
  std::vector<DatasetRecord> train;
  std::vector<DatasetRecord> validation;
};

// A video is held out when its id hash falls in the lowest `fraction` of
// 1000 buckets.
inline bool is_validation(const std::string& video_id, double fraction) {
  return static_cast<double>(fnv1a64(video_id) % 1000) < fraction * 1000.0;
}

inline Split split_dataset(const std::vector<DatasetRecord>& records, double fraction) {
  Split s;
  for (const auto& r : records) (is_validation(r.video_id, fraction) ? s.validation : s.train).push_back(r);
  return s;
}

inline std::vector<DatasetRecord> limit_candidates(std::vector<DatasetRecord> records, int n) {
  if (n <= 0) return records;
  for (auto& r : records) r = oracle::with_candidates(std::move(r), n);
  return records;
}

// Vocabulary over gt sentences and ingredient names.
inline Vocabulary corpus_vocabulary(const std::vector<DatasetRecord>& records, int min_count) {
  std::vector<Tokens> corpus;
  for (const auto& r : records) {
    for (const auto& s : r.steps) corpus.push_back(s.sentence);
    for (const auto& i : r.ingredients) corpus.push_back(tokenize(i));
  }
  return build_vocabulary(corpus, min_count);
}

// Content hash of a dataset's canonical JSON.
inline std::string dataset_hash(const std::vector<DatasetRecord>& records) {
  return hex64(fnv1a64(dataset_to_string(records)));
}

// Random selection baseline: as many distinct candidates as the video has gt
// steps (capped by the candidate count), uniformly drawn, in draw order,
// with empty sentences.
inline std::vector<PredictionRecipe> random_baseline(const std::vector<DatasetRecord>& records,
                                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PredictionRecipe> out;
  for (const auto& r : records) {
    std::vector<int> idx(r.candidates.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    const std::size_t k = std::min(idx.size(), r.steps.size());
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(k);
    PredictionRecipe p;
    p.video_id = r.video_id;
    for (int i : idx) {
      p.selections.push_back(i);
      p.sentences.emplace_back();
      p.intervals.push_back(r.candidates[static_cast<std::size_t>(i)].interval);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace recipegen::harness

#endif  // RECIPEGEN_HARNESS_DATA_HPP_
