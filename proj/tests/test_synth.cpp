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

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "recipegen/core/dataset_io.hpp"
#include "recipegen/eval/report.hpp"
#include "recipegen/oracle/oracle.hpp"
#include "recipegen/synth/world.hpp"

namespace {

using namespace recipegen;
using namespace recipegen::synth;

WorldConfig small_world(int videos = 30) {
  WorldConfig c;
  c.num_videos = videos;
  return c;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return d / std::sqrt(na * nb);
}

TEST(WorldConfig, DefaultsValidateAndRoundTrip) {
  WorldConfig c;
  EXPECT_NO_THROW(c.validate());
  c.seed = 99;
  c.jitter_sigma = 0.1;
  const WorldConfig back = world_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_THROW(world_config_from_json({{"bogus", 1}}), ConfigError);
}

TEST(WorldConfig, InfeasibleConfigsRejected) {
  WorldConfig c;
  c.n_candidates = 5;
  EXPECT_THROW(generate_world(c), ConfigError);
  c = {};
  c.max_steps = 13;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.distractor_fraction = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(GenerateWorld, SameSeedIsBitIdentical) {
  const auto a = generate_world(small_world());
  const auto b = generate_world(small_world());
  EXPECT_EQ(dataset_to_string(a), dataset_to_string(b));
  WorldConfig other = small_world();
  other.seed = 2;
  EXPECT_NE(dataset_to_string(generate_world(other)), dataset_to_string(a));
}

TEST(GenerateWorld, RecordsSatisfyInvariants) {
  const WorldConfig cfg = small_world(60);
  const auto data = generate_world(cfg);
  ASSERT_EQ(data.size(), 60u);
  for (std::size_t v = 0; v < data.size(); ++v) {
    const auto& r = data[v];
    if (v) EXPECT_LT(data[v - 1].video_id, r.video_id);
    EXPECT_GE(r.steps.size(), static_cast<std::size_t>(cfg.min_steps));
    EXPECT_LE(r.steps.size(), static_cast<std::size_t>(cfg.max_steps));
    EXPECT_EQ(r.candidates.size(), static_cast<std::size_t>(cfg.n_candidates));
    for (std::size_t t = 0; t < r.steps.size(); ++t) {
      EXPECT_LT(r.steps[t].interval.start, r.steps[t].interval.end);
      EXPECT_GE(r.steps[t].interval.start, 0.0);
      EXPECT_LE(r.steps[t].interval.end, r.duration);
      if (t) EXPECT_LE(r.steps[t - 1].interval.end, r.steps[t].interval.start);
    }
    for (std::size_t n = 1; n < r.candidates.size(); ++n)
      EXPECT_LE(r.candidates[n - 1].interval.start, r.candidates[n].interval.start);
    // Survives a save/load validation pass.
    EXPECT_NO_THROW(parse_dataset(dataset_to_string({r}), "generated"));
  }
}

// Scan each sentence for pool ingredients; every hit must be a listed
// ingredient or part of a longer listed ingredient matched at the same spot.
TEST(GenerateWorld, SentenceIngredientsComeFromVideoList) {
  const WorldConfig cfg = small_world(80);
  for (const auto& r : generate_world(cfg)) {
    for (const auto& step : r.steps) {
      for (const auto& ing : cfg.ingredient_pool) {
        const Tokens words = tokenize(ing);
        if (!contains_run(step.sentence, words)) continue;
        bool listed = false;
        for (const auto& own : r.ingredients) {
          const Tokens own_words = tokenize(own);
          listed = listed || (contains_run(own_words, words) && contains_run(step.sentence, own_words));
        }
        EXPECT_TRUE(listed) << r.video_id << ": '" << ing << "' in '" << join_tokens(step.sentence) << "'";
      }
    }
  }
}

TEST(GenerateWorld, VocabularyIsSmallAndClosed) {
  std::set<std::string> vocab;
  for (const auto& r : generate_world(small_world(200)))
    for (const auto& s : r.steps) vocab.insert(s.sentence.begin(), s.sentence.end());
  EXPECT_GE(vocab.size(), 50u);
  EXPECT_LE(vocab.size(), 200u);
}

TEST(ProposeCandidates, ZeroJitterNoDistractorsReproducesSteps) {
  WorldConfig cfg = small_world(20);
  cfg.jitter_sigma = 0.0;
  cfg.distractor_fraction = 0.0;
  cfg.noise_scale = 0.0;
  cfg.min_steps = cfg.max_steps = cfg.n_candidates = 6;
  for (const auto& r : generate_world(cfg)) {
    ASSERT_EQ(r.candidates.size(), r.steps.size());
    const auto a = oracle::oracle_select(r.candidates, r.steps);
    for (std::size_t t = 0; t < r.steps.size(); ++t) {
      EXPECT_EQ(r.candidates[t].interval, r.steps[t].interval);
      EXPECT_EQ(a.tious[t], 1.0);
    }
  }
}

TEST(ProposeCandidates, JitteredCopiesKeepMinimumTiou) {
  const WorldConfig cfg = small_world(40);
  for (const auto& r : generate_world(cfg)) {
    for (std::size_t t = 0; t < r.steps.size(); ++t) {
      bool found = false;
      for (const auto& c : r.candidates.candidates)
        if (c.rank == static_cast<int>(t)) found = eval::tiou(c.interval, r.steps[t].interval) >= cfg.min_jitter_tiou;
      EXPECT_TRUE(found);
    }
  }
}

TEST(ProposeCandidates, AllDistractorMeanTiouMatchesRecount) {
  WorldConfig cfg = small_world(25);
  cfg.distractor_fraction = 1.0;
  const auto data = generate_world(cfg);
  const auto rep = oracle::oracle_report(data, oracle::SentenceSource::kGtSentences);
  double sum = 0;
  int n = 0;
  for (const auto& r : data) {
    for (const auto& s : r.steps) {
      double best = 0;
      for (const auto& c : r.candidates.candidates) best = std::max(best, eval::tiou(c.interval, s.interval));
      sum += best;
      ++n;
    }
  }
  EXPECT_NEAR(rep.mean_tiou, sum / n, 1e-12);
}

TEST(ProposeCandidates, NestedSweepMeanTiouNonDecreasing) {
  WorldConfig cfg = small_world(40);
  cfg.n_candidates = 100;
  const auto rows = oracle::oracle_sweep(generate_world(cfg), {25, 50, 100}, oracle::SentenceSource::kGtSentences);
  EXPECT_LE(rows[0].mean_tiou, rows[1].mean_tiou);
  EXPECT_LE(rows[1].mean_tiou, rows[2].mean_tiou);
}

TEST(Featurize, ZeroNoiseSameSemanticsIdentical) {
  const WorldConfig cfg = small_world(1);
  const SemanticTable table = SemanticTable::build(cfg);
  const std::vector<RecipeStep> steps = {{{10, 20}, {"x"}}};
  const std::vector<StepProgram> program = {{2, {1, 4}, {0, 3}}};
  Rng a(1), b(2);
  EXPECT_EQ(featurize_event({10, 20}, steps, program, table, 0.0, cfg.feature_dim, a),
            featurize_event({10, 20}, steps, program, table, 0.0, cfg.feature_dim, b));
  const auto outside = featurize_event({30, 40}, steps, program, table, 0.0, cfg.feature_dim, a);
  for (double x : outside) EXPECT_EQ(x, 0.0);
}

TEST(Featurize, SemanticsDistinguishMergedSpans) {
  const WorldConfig cfg = small_world(1);
  const SemanticTable table = SemanticTable::build(cfg);
  const std::vector<RecipeStep> steps = {{{0, 10}, {"x"}}, {{10, 20}, {"y"}}};
  const std::vector<StepProgram> program = {{2, {2}, {0}}, {2, {2, 3}, {0, 0}}};
  Rng rng(3);
  const auto exact = featurize_event({0, 10}, steps, program, table, 0.0, cfg.feature_dim, rng);
  const auto merged = featurize_event({0, 20}, steps, program, table, 0.0, cfg.feature_dim, rng);
  EXPECT_LT(cosine(exact, merged), 0.999);
}

// A jittered copy is closer to its own step's feature than to any other
// step's feature, measured over a generated corpus at noise 0.1.
TEST(Featurize, JitteredCopyClosestToOwnStep) {
  WorldConfig cfg = small_world(40);
  cfg.noise_scale = 0.1;
  const SemanticTable table = SemanticTable::build(cfg);
  int total = 0, correct = 0;
  for (int v = 0; v < cfg.num_videos; ++v) {
    const GeneratedVideo g = generate_video(cfg, table, v);
    Rng rng(static_cast<std::uint64_t>(v));
    std::vector<std::vector<double>> step_features;
    for (const auto& s : g.record.steps)
      step_features.push_back(featurize_event(s.interval, g.record.steps, g.program, table,
                                              cfg.noise_scale, cfg.feature_dim, rng));
    for (const auto& c : g.record.candidates.candidates) {
      if (c.rank >= static_cast<int>(g.record.steps.size())) continue;
      const double own = cosine(c.feature, step_features[static_cast<std::size_t>(c.rank)]);
      bool best = true;
      for (std::size_t t = 0; t < step_features.size(); ++t)
        if (static_cast<int>(t) != c.rank && cosine(c.feature, step_features[t]) >= own) best = false;
      correct += best;
      ++total;
    }
  }
  EXPECT_GE(static_cast<double>(correct) / total, 0.95) << correct << "/" << total;
}

// Selecting each step's oracle candidate in order is the knowledge-optimal
// selector; on the default world it reaches SODA-tIoU f1 >= 0.9.
TEST(Learnability, OracleSelectorReachesSodaTiou) {
  const auto data = generate_world(WorldConfig{});
  const auto rep = oracle::oracle_report(data, oracle::SentenceSource::kGtSentences);
  EXPECT_GE(rep.scores.at("soda.tiou"), 0.9);
}

}  // namespace
