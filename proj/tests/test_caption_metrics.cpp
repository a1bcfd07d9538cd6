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
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "recipegen/metrics/bleu.hpp"
#include "recipegen/metrics/cider.hpp"
#include "recipegen/metrics/meteor.hpp"
#include "support.hpp"

namespace {

using namespace recipegen;
using namespace recipegen::metrics;

std::map<std::string, int> grams(const Tokens& s, int n) {
  std::map<std::string, int> out;
  for (int i = 0; i + n <= static_cast<int>(s.size()); ++i) {
    std::string key;
    for (int k = 0; k < n; ++k) key += s[static_cast<std::size_t>(i + k)] + "|";
    ++out[key];
  }
  return out;
}

// Straight-line BLEU-4 with add-one smoothing on orders 2..4.
double reference_bleu(const Tokens& c, const std::vector<Tokens>& refs) {
  double logp = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const auto cg = grams(c, n);
    double match = 0.0, total = 0.0;
    for (const auto& [g, cnt] : cg) {
      int best = 0;
      for (const auto& r : refs) {
        const auto rg = grams(r, n);
        auto it = rg.find(g);
        if (it != rg.end()) best = std::max(best, it->second);
      }
      match += std::min(cnt, best);
      total += cnt;
    }
    if (n > 1) { match += 1; total += 1; }
    if (match == 0) return 0.0;
    logp += std::log(match / total);
  }
  int best_len = -1;
  for (const auto& r : refs) {
    const int d = std::abs(static_cast<int>(r.size()) - static_cast<int>(c.size()));
    const int bd = std::abs(best_len - static_cast<int>(c.size()));
    if (best_len < 0 || d < bd || (d == bd && static_cast<int>(r.size()) < best_len))
      best_len = static_cast<int>(r.size());
  }
  const double bp = c.size() < static_cast<std::size_t>(best_len)
                        ? std::exp(1.0 - double(best_len) / double(c.size()))
                        : 1.0;
  return bp * std::exp(logp / 4.0);
}

// CIDEr-D computed from per-order dictionaries keyed by joined strings.
double reference_cider(const Tokens& c, const std::vector<Tokens>& refs,
                       const std::vector<std::vector<Tokens>>& corpus) {
  const double docs = static_cast<double>(corpus.size());
  auto vec = [&](const Tokens& s, int n) {
    std::map<std::string, double> v;
    for (const auto& [g, cnt] : grams(s, n)) {
      int df = 0;
      for (const auto& doc : corpus) {
        bool hit = false;
        for (const auto& r : doc) hit = hit || grams(r, n).count(g) > 0;
        df += hit;
      }
      v[g] = cnt * (std::log(docs) - std::log(std::max(1.0, double(df))));
    }
    return v;
  };
  auto norm = [](const std::map<std::string, double>& v) {
    double s = 0;
    for (const auto& [g, x] : v) s += x * x;
    return std::sqrt(s);
  };
  double total = 0;
  for (const auto& r : refs) {
    double score = 0;
    for (int n = 1; n <= 4; ++n) {
      const auto vc = vec(c, n), vr = vec(r, n);
      double dot = 0;
      for (const auto& [g, x] : vc)
        if (vr.count(g)) dot += std::min(x, vr.at(g)) * vr.at(g);
      const double nc = norm(vc), nr = norm(vr);
      if (nc != 0 && nr != 0) dot /= nc * nr;
      const double delta = double(c.size()) - double(r.size());
      score += dot * std::exp(-delta * delta / 72.0);
    }
    total += score / 4.0;
  }
  return 10.0 * total / double(refs.size());
}

TEST(Bleu, IdentityIsOne) {
  EXPECT_DOUBLE_EQ(bleu4({"crack", "the", "eggs", "into", "a", "bowl"},
                         {{"crack", "the", "eggs", "into", "a", "bowl"}}),
                   1.0);
  EXPECT_DOUBLE_EQ(bleu4({"stir"}, {{"stir"}}), 1.0);
}

TEST(Bleu, BrevityPenaltyHandValue) {
  EXPECT_NEAR(bleu4({"the", "cat", "sat"}, {{"the", "cat", "sat", "down"}}),
              std::exp(1.0 - 4.0 / 3.0), 1e-12);
}

TEST(Bleu, NoUnigramOverlapIsZero) {
  EXPECT_EQ(bleu4({"a", "b"}, {{"c", "d"}}), 0.0);
}

TEST(Bleu, MatchesStraightLineImplementation) {
  testing_support::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const Tokens c = testing_support::random_sentence(rng, 6, 1, 9);
    std::vector<Tokens> refs;
    const int nr = testing_support::uniform_int(rng, 1, 3);
    for (int k = 0; k < nr; ++k) refs.push_back(testing_support::random_sentence(rng, 6, 1, 9));
    EXPECT_NEAR(bleu4(c, refs), reference_bleu(c, refs), 1e-12);
  }
}

TEST(Meteor, HandExample) {
  EXPECT_NEAR(meteor_lite({"a", "b", "c", "d"}, {"a", "x", "c", "y"}), 0.25, 1e-12);
}

TEST(Meteor, IdentityScore) {
  for (int n = 1; n <= 6; ++n) {
    Tokens s;
    for (int i = 0; i < n; ++i) s.push_back("t" + std::to_string(i));
    EXPECT_NEAR(meteor_lite(s, s), 1.0 - 0.5 / (n * n * n), 1e-12);
  }
}

TEST(Meteor, MatchCountEqualsMultisetIntersection) {
  testing_support::Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const Tokens c = testing_support::random_sentence(rng, 5, 1, 10);
    const Tokens r = testing_support::random_sentence(rng, 5, 1, 10);
    std::map<std::string, int> cc, rc;
    for (const auto& t : c) ++cc[t];
    for (const auto& t : r) ++rc[t];
    int inter = 0;
    for (const auto& [t, n] : cc) inter += std::min(n, rc[t]);
    const ExactAlignment a = align_exact(c, r);
    EXPECT_EQ(a.matches, inter);
    EXPECT_LE(a.chunks, a.matches);
    const double s = meteor_lite(c, r);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Cider, IdentityCountsOrdersWithInformativeGrams) {
  const std::vector<std::vector<Tokens>> corpus = {{{"cut", "the", "onion"}}, {{"boil", "water"}}};
  const CorpusDF df = build_df(corpus);
  // Three orders have n-grams with idf log 2; the 4-gram order is empty.
  EXPECT_NEAR(cider_d({"cut", "the", "onion"}, {{"cut", "the", "onion"}}, df), 7.5, 1e-12);
}

TEST(Cider, UbiquitousGramsCarryNoWeight) {
  const std::vector<std::vector<Tokens>> corpus = {{{"stir"}}, {{"stir"}}};
  EXPECT_EQ(cider_d({"stir"}, {{"stir"}}, build_df(corpus)), 0.0);
}

TEST(Cider, LengthPenaltyFormula) {
  EXPECT_DOUBLE_EQ(cider_length_penalty(5, 5, 6), 1.0);
  EXPECT_NEAR(cider_length_penalty(3, 9, 6), std::exp(-0.5), 1e-15);
}

TEST(Cider, MatchesDictionaryImplementation) {
  testing_support::Rng rng(13);
  std::vector<std::vector<Tokens>> corpus;
  for (int d = 0; d < 12; ++d) {
    std::vector<Tokens> doc;
    for (int k = 0; k < 3; ++k) doc.push_back(testing_support::random_sentence(rng, 8, 2, 8));
    corpus.push_back(doc);
  }
  const CorpusDF df = build_df(corpus);
  for (int i = 0; i < 100; ++i) {
    const Tokens c = testing_support::random_sentence(rng, 8, 1, 8);
    const auto& refs = corpus[static_cast<std::size_t>(i % corpus.size())];
    EXPECT_NEAR(cider_d(c, refs, df), reference_cider(c, refs, corpus), 1e-10);
  }
}

TEST(Cider, RequiresDocumentFrequencies) {
  EXPECT_THROW(cider_d({"a"}, {{"a"}}, CorpusDF{}), Error);
}

}  // namespace
