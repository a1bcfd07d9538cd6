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

#include <string>
#include <vector>

#include "recipegen/core/dataset_io.hpp"
#include "recipegen/core/text.hpp"
#include "recipegen/core/vocabulary.hpp"
#include "support.hpp"

namespace {

using namespace recipegen;

const char* kTwoRecords = R"([
{"video_id": "v2", "duration": 100, "candidates": [{"start": 0, "end": 10, "feature": [1, 2]}],
 "steps": [{"start": 0, "end": 10, "sentence": "Crack the eggs."}], "ingredients": ["Eggs"]},
{"video_id": "v1", "duration": 50, "candidates": [{"start": 1, "end": 4, "feature": [0, 0]},
 {"start": 2, "end": 9, "feature": [1, 1]}],
 "steps": [{"start": 1, "end": 4, "sentence": "stir"}, {"start": 5, "end": 9, "sentence": "fry it"}]}
])";

TEST(Text, TokenizeLowercasesAndDropsPunctuation) {
  EXPECT_EQ(tokenize("Crack the Eggs, then stir!"),
            (Tokens{"crack", "the", "eggs", "then", "stir"}));
  EXPECT_TRUE(tokenize("  ...  ").empty());
  EXPECT_EQ(join_tokens({"a", "b"}), "a b");
}

TEST(Text, ContainsRunMatchesContiguousOnly) {
  EXPECT_TRUE(contains_run({"add", "olive", "oil"}, {"olive", "oil"}));
  EXPECT_FALSE(contains_run({"olive", "the", "oil"}, {"olive", "oil"}));
  EXPECT_FALSE(contains_run({"oil"}, {}));
}

TEST(DatasetIo, ParsesAndOrdersById) {
  const auto records = parse_dataset(kTwoRecords, "inline");
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].video_id, "v1");
  EXPECT_EQ(records[1].video_id, "v2");
  EXPECT_EQ(records[1].steps[0].sentence, (Tokens{"crack", "the", "eggs"}));
  EXPECT_EQ(records[1].ingredients, (std::vector<std::string>{"eggs"}));
  EXPECT_EQ(records[0].candidates.size(), 2u);
  EXPECT_EQ(records[0].candidates[1].rank, 1);
}

TEST(DatasetIo, RejectsZeroLengthEventNamingRecord) {
  const std::string text = R"([{"video_id": "bad_one", "duration": 10,
    "candidates": [{"start": 3, "end": 3, "feature": [1]}],
    "steps": [{"start": 0, "end": 1, "sentence": "x"}]}])";
  try {
    parse_dataset(text, "inline");
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("bad_one"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("candidates[0]"), std::string::npos);
  }
}

TEST(DatasetIo, RejectsUnsortedCandidatesAndRaggedFeatures) {
  const std::string unsorted = R"([{"video_id": "u", "duration": 10,
    "candidates": [{"start": 3, "end": 4, "feature": [1]}, {"start": 1, "end": 2, "feature": [1]}],
    "steps": [{"start": 0, "end": 1, "sentence": "x"}]}])";
  EXPECT_THROW(parse_dataset(unsorted, "inline"), ValidationError);
  const std::string ragged = R"([{"video_id": "r", "duration": 10,
    "candidates": [{"start": 1, "end": 4, "feature": [1]}, {"start": 2, "end": 3, "feature": [1, 2]}],
    "steps": [{"start": 0, "end": 1, "sentence": "x"}]}])";
  EXPECT_THROW(parse_dataset(ragged, "inline"), ValidationError);
}

TEST(DatasetIo, MalformedJsonReportsLine) {
  const std::string text = "[\n{\"video_id\": \"a\",\n \"duration\": ,\n}]";
  try {
    parse_dataset(text, "broken.json");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(DatasetIo, DuplicateIdsRejected) {
  const std::string one = R"({"video_id": "d", "duration": 10, "candidates": [],
    "steps": [{"start": 0, "end": 1, "sentence": "x"}]})";
  EXPECT_THROW(parse_dataset("[" + one + "," + one + "]", "inline"), ValidationError);
}

TEST(DatasetIo, TruncatesLongSentencesAndStepLists) {
  std::string steps;
  for (int i = 0; i < 14; ++i) {
    if (i) steps += ",";
    steps += R"({"start": )" + std::to_string(i) + R"(, "end": )" + std::to_string(i + 1) +
             R"(, "sentence": "a b c d e f g h i j k l m n o p q r s t u v w"})";
  }
  const std::string text = R"([{"video_id": "t", "duration": 20, "candidates": [], "steps": [)" +
                           steps + "]}]";
  std::vector<std::string> warnings;
  const auto records = parse_dataset(text, "inline", LoadOptions{}, &warnings);
  EXPECT_EQ(records[0].steps.size(), kDefaultMaxSteps);
  EXPECT_EQ(records[0].steps[0].sentence.size(), kDefaultMaxSentenceLen);
  EXPECT_FALSE(warnings.empty());
}

// save -> load is the identity on randomized records.
TEST(DatasetIo, RoundTripProperty) {
  testing_support::Rng rng(7);
  const auto dir = testing_support::scratch_dir("roundtrip");
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<DatasetRecord> records;
    const int n = testing_support::uniform_int(rng, 0, 5);
    for (int i = 0; i < n; ++i) records.push_back(testing_support::random_record(rng, "vid" + std::to_string(i)));
    const std::string path = (dir / "d.json").string();
    save_dataset(path, records);
    EXPECT_EQ(load_dataset(path), records) << "trial " << trial;
  }
}

TEST(DatasetIo, PredictionRoundTrip) {
  PredictionRecipe p{"v", {2, 0}, {{"cut", "the", "tomato"}, {"boil"}}, {{1.5, 2.25}, {0.0, 1.0}}};
  const auto back = parse_predictions(predictions_to_string({p}), "inline");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], p);
}

TEST(DatasetIo, ValidatePredictionRangeCheck) {
  const auto records = parse_dataset(kTwoRecords, "inline");
  PredictionRecipe ok{"v1", {1}, {{"x"}}, {{2, 9}}};
  EXPECT_NO_THROW(validate_prediction(ok, records[0]));
  PredictionRecipe bad{"v1", {2}, {{"x"}}, {{2, 9}}};
  EXPECT_THROW(validate_prediction(bad, records[0]), ValidationError);
}

TEST(Vocabulary, MinCountFiltersRareTokens) {
  const Vocabulary v = build_vocabulary({{"a", "a", "b"}}, 2);
  EXPECT_TRUE(v.contains("a"));
  EXPECT_FALSE(v.contains("b"));
  EXPECT_EQ(v.id("b"), Vocabulary::kUnk);
}

TEST(Vocabulary, MinCountOneKeepsEverythingPlusReserved) {
  const Vocabulary v = build_vocabulary({{"x", "y"}, {"z", "x"}}, 1);
  EXPECT_EQ(v.size(), 3 + Vocabulary::kNumReserved);
  EXPECT_EQ(v.token(Vocabulary::kPad), "<pad>");
  EXPECT_EQ(v.token(Vocabulary::kEos), "<eos>");
}

TEST(Vocabulary, OrderIsFrequencyThenLexicographic) {
  const Vocabulary v = build_vocabulary({{"b", "c", "a", "c"}, {"b", "d"}}, 1);
  EXPECT_EQ(v.regular_tokens(), (std::vector<std::string>{"b", "c", "a", "d"}));
}

TEST(Vocabulary, Errors) {
  EXPECT_THROW(build_vocabulary({}, 1), ValidationError);
  EXPECT_THROW(build_vocabulary({{"a"}}, 0), ConfigError);
}

TEST(Vocabulary, BijectionProperty) {
  testing_support::Rng rng(3);
  std::vector<Tokens> corpus;
  for (int i = 0; i < 50; ++i) corpus.push_back(testing_support::random_sentence(rng, 30, 1, 10));
  const Vocabulary v = build_vocabulary(corpus, 1);
  for (int id = 0; id < v.size(); ++id) EXPECT_EQ(v.id(v.token(id)), id);
  for (const auto& s : corpus) EXPECT_EQ(v.decode(v.encode(s)), s);
  EXPECT_EQ(build_vocabulary(corpus, 1), v);
}

}  // namespace
