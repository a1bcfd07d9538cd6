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

#ifndef RECIPEGEN_ORACLE_ORACLE_HPP_
#define RECIPEGEN_ORACLE_ORACLE_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "recipegen/core/dataset_io.hpp"
#include "recipegen/core/error.hpp"
#include "recipegen/core/types.hpp"
#include "recipegen/eval/report.hpp"
#include "recipegen/eval/tiou.hpp"

namespace recipegen::oracle {

// Per ground-truth step: the candidate with maximum tIoU.
struct OracleAssignment {
  std::vector<int> indices;
  std::vector<double> tious;

  // Number of steps sharing a candidate with an earlier step.
  int duplicates() const {
    std::set<int> seen;
    int dup = 0;
    for (int i : indices)
      if (!seen.insert(i).second) ++dup;
    return dup;
  }
};

// Independent argmax per step; candidates may be reused. Ties go to the
// earliest start, then the lowest index.
inline OracleAssignment oracle_select(const EventCandidateSet& candidates,
                                      const std::vector<RecipeStep>& steps) {
  if (candidates.empty()) throw Error("oracle_select: empty candidate set");
  OracleAssignment out;
  for (const auto& step : steps) {
    int best = 0;
    double best_tiou = eval::tiou(candidates[0].interval, step.interval);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      const double t = eval::tiou(candidates[i].interval, step.interval);
      const auto& bi = candidates[static_cast<std::size_t>(best)].interval;
      if (t > best_tiou || (t == best_tiou && candidates[i].interval.start < bi.start)) {
        best = static_cast<int>(i);
        best_tiou = t;
      }
    }
    out.indices.push_back(best);
    out.tious.push_back(best_tiou);
  }
  return out;
}

inline OracleAssignment oracle_select(const EventCandidateSet& candidates,
                                      const GroundTruthRecipe& gt) {
  return oracle_select(candidates, gt.steps);
}

// Candidates whose generation rank is below `n`, kept in start order. Sets
// for increasing n are nested.
inline EventCandidateSet nested_subset(const EventCandidateSet& set, int n) {
  EventCandidateSet out;
  for (const auto& c : set.candidates)
    if (c.rank < n) out.candidates.push_back(c);
  return out;
}

inline DatasetRecord with_candidates(DatasetRecord record, int n) {
  record.candidates = nested_subset(record.candidates, n);
  return record;
}

enum class SentenceSource { kAttached, kGtSentences };

inline SentenceSource parse_sentence_source(const std::string& s) {
  if (s == "attached") return SentenceSource::kAttached;
  if (s == "gt-sentences") return SentenceSource::kGtSentences;
  throw ConfigError("unknown oracle mode '" + s + "' (expected attached|gt-sentences)");
}

inline std::string to_string(SentenceSource s) {
  return s == SentenceSource::kAttached ? "attached" : "gt-sentences";
}

inline constexpr int kHistogramBins = 10;

struct OracleReport {
  eval::MetricReport scores;
  double mean_tiou = 0.0;
  std::array<int, kHistogramBins> histogram{};
  int duplicate_assignments = 0;
  // Steps whose oracle candidate had no attached sentence (gt sentence used).
  int sentence_fallbacks = 0;
  int steps = 0;
  SentenceSource source = SentenceSource::kGtSentences;
  std::vector<PredictionRecipe> predictions;
};

// Bin width 0.1; tIoU 1.0 falls in the last bin.
inline int histogram_bin(double t) {
  return std::clamp(static_cast<int>(t * kHistogramBins), 0, kHistogramBins - 1);
}

inline PredictionRecipe oracle_prediction(const DatasetRecord& record, const OracleAssignment& a,
                                          SentenceSource source, int* fallbacks = nullptr) {
  PredictionRecipe p;
  p.video_id = record.video_id;
  for (std::size_t t = 0; t < a.indices.size(); ++t) {
    const Candidate& c = record.candidates[static_cast<std::size_t>(a.indices[t])];
    p.selections.push_back(a.indices[t]);
    p.intervals.push_back(c.interval);
    if (source == SentenceSource::kAttached && !c.sentence.empty()) {
      p.sentences.push_back(c.sentence);
    } else {
      if (source == SentenceSource::kAttached && fallbacks) ++*fallbacks;
      p.sentences.push_back(record.steps[t].sentence);
    }
  }
  return p;
}

inline OracleReport oracle_report(const std::vector<DatasetRecord>& dataset, SentenceSource source) {
  OracleReport out;
  out.source = source;
  double tiou_sum = 0.0;
  for (const auto& record : dataset) {
    const OracleAssignment a = oracle_select(record.candidates, record.steps);
    out.duplicate_assignments += a.duplicates();
    for (double t : a.tious) {
      tiou_sum += t;
      ++out.histogram[static_cast<std::size_t>(histogram_bin(t))];
      ++out.steps;
    }
    out.predictions.push_back(oracle_prediction(record, a, source, &out.sentence_fallbacks));
  }
  out.mean_tiou = out.steps ? tiou_sum / out.steps : 0.0;
  out.scores = eval::evaluate_corpus(out.predictions, dataset);
  return out;
}

inline std::string histogram_csv(const OracleReport& r) {
  std::ostringstream os;
  os << "bin,count\n";
  for (int b = 0; b < kHistogramBins; ++b)
    os << b / 10 << '.' << b % 10 << ',' << r.histogram[static_cast<std::size_t>(b)] << '\n';
  return os.str();
}

inline Json oracle_report_json(const OracleReport& r) {
  Json j = eval::report_to_json(r.scores, Json{{"oracle_sentences", to_string(r.source)}});
  j["oracle"] = Json{{"mean_tiou", r.mean_tiou},
                     {"steps", r.steps},
                     {"duplicate_assignments", r.duplicate_assignments},
                     {"sentence_fallbacks", r.sentence_fallbacks},
                     {"histogram", r.histogram}};
  return j;
}

struct SweepRow {
  int n = 0;
  double mean_tiou = 0.0;
  eval::MetricReport scores;
  int duplicate_assignments = 0;
};

// Oracle analysis over nested candidate subsets, one row per N.
inline std::vector<SweepRow> oracle_sweep(const std::vector<DatasetRecord>& dataset,
                                          const std::vector<int>& ns, SentenceSource source) {
  std::vector<SweepRow> rows;
  for (int n : ns) {
    if (n < 1) throw ConfigError("oracle sweep: N must be >= 1");
    std::vector<DatasetRecord> subset;
    subset.reserve(dataset.size());
    for (const auto& r : dataset) {
      subset.push_back(with_candidates(r, n));
      if (subset.back().candidates.empty())
        throw ValidationError("record '" + r.video_id + "': no candidate with rank < " +
                              std::to_string(n));
    }
    const OracleReport rep = oracle_report(subset, source);
    rows.push_back(SweepRow{n, rep.mean_tiou, rep.scores, rep.duplicate_assignments});
  }
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  os << "N,mean_tiou,duplicate_assignments";
  for (const auto& k : eval::report_metric_keys()) os << ',' << k;
  os << '\n';
  for (const auto& r : rows) {
    os << r.n << ',' << r.mean_tiou << ',' << r.duplicate_assignments;
    for (const auto& k : eval::report_metric_keys()) os << ',' << r.scores.at(k);
    os << '\n';
  }
  return os.str();
}

}  // namespace recipegen::oracle

#endif  // RECIPEGEN_ORACLE_ORACLE_HPP_
