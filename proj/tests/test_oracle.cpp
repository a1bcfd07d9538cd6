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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "recipegen/oracle/oracle.hpp"
#include "support.hpp"

namespace {

using namespace recipegen;
using namespace recipegen::oracle;

TEST(OracleSelect, MatchesExhaustiveScan) {
  testing_support::Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const double dur = testing_support::uniform(rng, 10, 200);
    const auto cands = testing_support::random_candidates(rng, testing_support::uniform_int(rng, 1, 12), dur, 1);
    const auto steps = testing_support::random_steps(rng, testing_support::uniform_int(rng, 1, 6), dur);
    const OracleAssignment a = oracle_select(cands, steps);
    EXPECT_EQ(a.indices, testing_support::scan_oracle(cands, steps));
    for (std::size_t t = 0; t < steps.size(); ++t)
      EXPECT_EQ(a.tious[t], eval::tiou(cands[static_cast<std::size_t>(a.indices[t])].interval, steps[t].interval));
  }
}

TEST(OracleSelect, TiesGoToEarliestStart) {
  EventCandidateSet c{{{{0, 4}, {}, 0, {}}, {{2, 6}, {}, 1, {}}}};
  // Both candidates have tIoU 3/5 with [1, 5].
  const std::vector<RecipeStep> steps = {{{1, 5}, {"x"}}};
  const auto a = oracle_select(c, steps);
  EXPECT_EQ(eval::tiou({0, 4}, {1, 5}), eval::tiou({2, 6}, {1, 5}));
  EXPECT_EQ(a.indices[0], 0);
}

TEST(OracleSelect, DuplicatesAreCounted) {
  EventCandidateSet c{{{{0, 10}, {}, 0, {}}, {{50, 60}, {}, 1, {}}}};
  const std::vector<RecipeStep> steps = {{{0, 4}, {"a"}}, {{5, 9}, {"b"}}, {{50, 60}, {"c"}}};
  const auto a = oracle_select(c, steps);
  EXPECT_EQ(a.indices, (std::vector<int>{0, 0, 1}));
  EXPECT_EQ(a.duplicates(), 1);
}

TEST(OracleSelect, EmptyCandidatesRejected) {
  EXPECT_THROW(oracle_select(EventCandidateSet{}, std::vector<RecipeStep>{{{0, 1}, {"a"}}}), Error);
}

TEST(OracleSelect, ExactCandidatesGiveUnitTiou) {
  testing_support::Rng rng(5);
  const auto steps = testing_support::random_steps(rng, 5, 100);
  EventCandidateSet c;
  for (std::size_t i = 0; i < steps.size(); ++i) c.candidates.push_back({steps[i].interval, {0.0}, int(i), {}});
  const auto a = oracle_select(c, steps);
  for (double t : a.tious) EXPECT_EQ(t, 1.0);
}

// Nested subsets by rank: the oracle tIoU per step can only improve with N.
TEST(NestedSubset, OracleTiouMonotoneInN) {
  testing_support::Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const double dur = 100;
    auto cands = testing_support::random_candidates(rng, 30, dur, 1);
    std::vector<int> ranks(30);
    std::iota(ranks.begin(), ranks.end(), 0);
    std::shuffle(ranks.begin(), ranks.end(), rng);
    for (std::size_t i = 0; i < 30; ++i) cands.candidates[i].rank = ranks[i];
    const auto steps = testing_support::random_steps(rng, 4, dur);
    std::vector<double> prev(steps.size(), -1.0);
    for (int n : {5, 10, 20, 30}) {
      const auto sub = nested_subset(cands, n);
      EXPECT_EQ(sub.size(), static_cast<std::size_t>(n));
      const auto a = oracle_select(sub, steps);
      for (std::size_t t = 0; t < steps.size(); ++t) {
        EXPECT_GE(a.tious[t], prev[t]);
        prev[t] = a.tious[t];
      }
    }
  }
}

TEST(Histogram, Bins) {
  EXPECT_EQ(histogram_bin(0.0), 0);
  EXPECT_EQ(histogram_bin(0.05), 0);
  EXPECT_EQ(histogram_bin(0.15), 1);
  EXPECT_EQ(histogram_bin(0.95), 9);
  EXPECT_EQ(histogram_bin(1.0), 9);
}

TEST(OracleReport, SentenceSources) {
  DatasetRecord r;
  r.video_id = "v";
  r.duration = 20;
  r.candidates.candidates = {{{0, 5}, {0.0}, 0, {"cut", "it"}}, {{6, 10}, {0.0}, 1, {}}};
  r.steps = {{{0, 5}, {"cut", "the", "tomato"}}, {{6, 10}, {"boil", "water"}}};
  const auto gt = oracle_report({r}, SentenceSource::kGtSentences);
  EXPECT_EQ(gt.predictions[0].sentences[0], (Tokens{"cut", "the", "tomato"}));
  EXPECT_EQ(gt.mean_tiou, 1.0);
  EXPECT_EQ(gt.scores.at("soda.tiou"), 1.0);
  EXPECT_EQ(gt.histogram[9], 2);
  const auto att = oracle_report({r}, SentenceSource::kAttached);
  EXPECT_EQ(att.predictions[0].sentences[0], (Tokens{"cut", "it"}));
  EXPECT_EQ(att.sentence_fallbacks, 1);
  EXPECT_EQ(parse_sentence_source("attached"), SentenceSource::kAttached);
  EXPECT_THROW(parse_sentence_source("other"), ConfigError);
}

TEST(OracleReport, HistogramCsvShape) {
  OracleReport r;
  r.histogram[3] = 4;
  const std::string csv = histogram_csv(r);
  EXPECT_EQ(csv.substr(0, 10), "bin,count\n");
  EXPECT_NE(csv.find("0.3,4\n"), std::string::npos);
}

TEST(OracleSweep, RowsPerN) {
  testing_support::Rng rng(3);
  std::vector<DatasetRecord> data;
  for (int i = 0; i < 4; ++i) {
    DatasetRecord r = testing_support::random_record(rng, "v" + std::to_string(i));
    r.candidates = testing_support::random_candidates(rng, 10, r.duration, 1);
    data.push_back(r);
  }
  const auto rows = oracle_sweep(data, {2, 5, 10}, SentenceSource::kGtSentences);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_LE(rows[0].mean_tiou, rows[1].mean_tiou);
  EXPECT_LE(rows[1].mean_tiou, rows[2].mean_tiou);
  const std::string csv = sweep_csv(rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_THROW(oracle_sweep(data, {0}, SentenceSource::kGtSentences), ConfigError);
}

}  // namespace
