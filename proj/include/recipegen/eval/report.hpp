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

#ifndef RECIPEGEN_EVAL_REPORT_HPP_
#define RECIPEGEN_EVAL_REPORT_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "recipegen/core/dataset_io.hpp"
#include "recipegen/core/types.hpp"
#include "recipegen/eval/count_stats.hpp"
#include "recipegen/eval/dvc_eval.hpp"
#include "recipegen/eval/soda.hpp"

namespace recipegen::eval {

inline constexpr int kCountEtas[] = {0, 1, 2, 3};

struct VideoScores {
  std::string video_id;
  int predicted = 0;
  int ground_truth = 0;
  std::map<std::string, double> metrics;
};

// Corpus-level metrics (flat name -> value) plus per-video rows.
struct MetricReport {
  std::map<std::string, double> metrics;
  std::vector<VideoScores> per_video;

  double at(const std::string& key) const {
    auto it = metrics.find(key);
    if (it == metrics.end()) throw Error("metric report has no key '" + key + "'");
    return it->second;
  }
};

inline metrics::CorpusDF reference_df(const std::vector<DatasetRecord>& dataset) {
  std::vector<std::vector<Tokens>> refs;
  refs.reserve(dataset.size());
  for (const auto& r : dataset) {
    std::vector<Tokens> sents;
    for (const auto& s : r.steps) sents.push_back(s.sentence);
    refs.push_back(std::move(sents));
  }
  return metrics::build_df(refs);
}

inline std::vector<std::string> report_metric_keys() {
  return {"dvc_eval.bleu4", "dvc_eval.meteor", "dvc_eval.cider_d", "soda.meteor",
          "soda.cider_d",   "soda.tiou",       "count_stats.eta0", "count_stats.eta1",
          "count_stats.eta2", "count_stats.eta3"};
}

// Scores predictions against the dataset's ground truth. Video ids must match
// one-to-one. CIDEr-D document frequencies come from the dataset's references.
inline MetricReport evaluate_corpus(const std::vector<PredictionRecipe>& preds,
                                    const std::vector<DatasetRecord>& dataset) {
  std::map<std::string, const PredictionRecipe*> by_id;
  for (const auto& p : preds) {
    if (!by_id.emplace(p.video_id, &p).second)
      throw ValidationError("duplicate prediction for video '" + p.video_id + "'");
  }
  std::vector<std::string> unmatched;
  std::set<std::string> dataset_ids;
  for (const auto& r : dataset) {
    dataset_ids.insert(r.video_id);
    if (!by_id.count(r.video_id)) unmatched.push_back(r.video_id + " (no prediction)");
  }
  for (const auto& p : preds)
    if (!dataset_ids.count(p.video_id)) unmatched.push_back(p.video_id + " (not in dataset)");
  if (!unmatched.empty()) {
    std::string msg = "unmatched video ids:";
    for (const auto& u : unmatched) msg += " " + u;
    throw ValidationError(msg);
  }

  MetricReport report;
  for (const auto& key : report_metric_keys()) report.metrics[key] = 0.0;
  if (dataset.empty()) return report;

  const metrics::CorpusDF df = reference_df(dataset);
  const SentenceScorer bleu(SentenceMetric::kBleu4);
  const SentenceScorer meteor(SentenceMetric::kMeteor);
  const SentenceScorer cider(SentenceMetric::kCiderD, &df);

  std::vector<std::pair<int, int>> counts;
  for (const auto& record : dataset) {
    const PredictionRecipe& pred = *by_id.at(record.video_id);
    validate_prediction(pred, record);
    const GroundTruthRecipe gt = record.ground_truth();
    VideoScores v;
    v.video_id = record.video_id;
    v.predicted = static_cast<int>(pred.size());
    v.ground_truth = static_cast<int>(gt.steps.size());
    v.metrics["dvc_eval.bleu4"] = dvc_eval(pred, gt, bleu);
    v.metrics["dvc_eval.meteor"] = dvc_eval(pred, gt, meteor);
    v.metrics["dvc_eval.cider_d"] = dvc_eval(pred, gt, cider);
    v.metrics["soda.meteor"] = soda(pred, gt, meteor).f1;
    v.metrics["soda.cider_d"] = soda(pred, gt, cider).f1;
    v.metrics["soda.tiou"] = soda_tiou(pred, gt).f1;
    for (const auto& [k, val] : v.metrics) report.metrics[k] += val;
    counts.emplace_back(v.predicted, v.ground_truth);
    report.per_video.push_back(std::move(v));
  }
  for (auto& [k, val] : report.metrics) val /= static_cast<double>(dataset.size());
  const auto stats = event_count_stats(counts, {std::begin(kCountEtas), std::end(kCountEtas)});
  for (const auto& [eta, pct] : stats) report.metrics["count_stats.eta" + std::to_string(eta)] = pct;
  return report;
}

inline Json report_metadata() {
  return Json{{"meteor_variant", "exact-lite"},
              {"bleu_smoothing", "add-one on orders 2-4"},
              {"dvc_eval_thresholds", {0.3, 0.5, 0.7, 0.9}},
              {"dvc_eval_rule", "tiou > theta"},
              {"soda_reported", "f1"},
              {"soda_references", "single"},
              {"cider_sigma", 6.0},
              {"scale", "raw (bleu/meteor/soda in [0,1], cider_d in [0,10], count_stats in %)"}};
}

inline Json report_to_json(const MetricReport& report, const Json& extra_metadata = Json::object()) {
  Json per_video = Json::array();
  for (const auto& v : report.per_video) {
    Json row{{"video_id", v.video_id}, {"predicted", v.predicted}, {"ground_truth", v.ground_truth}};
    for (const auto& [k, val] : v.metrics) row[k] = val;
    per_video.push_back(std::move(row));
  }
  Json meta = report_metadata();
  for (const auto& [k, val] : extra_metadata.items()) meta[k] = val;
  return Json{{"metrics", report.metrics}, {"per_video", per_video}, {"metadata", meta}};
}

}  // namespace recipegen::eval

#endif  // RECIPEGEN_EVAL_REPORT_HPP_
