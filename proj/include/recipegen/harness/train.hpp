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

#ifndef RECIPEGEN_HARNESS_TRAIN_HPP_
#define RECIPEGEN_HARNESS_TRAIN_HPP_

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "recipegen/eval/report.hpp"
#include "recipegen/harness/config.hpp"
#include "recipegen/harness/data.hpp"
#include "recipegen/model/checkpoint.hpp"
#include "recipegen/model/recipe_model.hpp"
#include "recipegen/nn/adam.hpp"
#include "recipegen/synth/world.hpp"

namespace recipegen::harness {

struct EpochLog {
  int epoch = 0;
  double lr = 0.0;
  double tau = 0.0;
  double event = 0.0;  // per-video means over the epoch
  double sentence = 0.0;
  double vsim = 0.0;
  double tattn = 0.0;
  double total = 0.0;
  std::map<std::string, double> validation;
};

inline std::string log_header() {
  std::string h = "epoch,lr,tau,loss_event,loss_sentence,loss_vsim,loss_tattn,loss_total";
  for (const auto& k : eval::report_metric_keys()) h += ",val." + k;
  return h;
}

inline std::string log_row(const EpochLog& e) {
  std::ostringstream ss;
  ss.precision(10);
  ss << e.epoch << ',' << e.lr << ',' << e.tau << ',' << e.event << ',' << e.sentence << ',' << e.vsim << ','
     << e.tattn << ',' << e.total;
  for (const auto& k : eval::report_metric_keys()) {
    auto it = e.validation.find(k);
    ss << ',';
    if (it != e.validation.end()) ss << it->second;
  }
  return ss.str();
}

template <typename T>
std::vector<PredictionRecipe> predict_all(const model::RecipeModel<T>& m, const std::vector<DatasetRecord>& records) {
  std::vector<PredictionRecipe> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(m.infer(r));
  return out;
}

template <typename T>
struct TrainResult {
  std::unique_ptr<model::RecipeModel<T>> model;  // parameters of the best epoch
  nlohmann::json best_checkpoint;
  std::vector<EpochLog> log;
  int best_epoch = -1;
  double best_metric = 0.0;
};

template <typename T>
std::unique_ptr<model::RecipeModel<T>> make_model(const ExperimentConfig& cfg, const std::vector<DatasetRecord>& train) {
  if (train.empty()) throw ValidationError("training split is empty");
  return std::make_unique<model::RecipeModel<T>>(cfg.model, static_cast<nn::Index>(train.front().candidates.feature_dim()),
                                                 corpus_vocabulary(train, cfg.training.vocab_min_count),
                                                 resolve_lexicon(cfg), cfg.seed);
}

// Adam over shuffled mini-batches with the warmup schedule. After every epoch
// the validation split is decoded and scored; the epoch with the best
// early-stop metric is kept (the last epoch when there is no validation data).
template <typename T>
TrainResult<T> train(const ExperimentConfig& cfg, const std::vector<DatasetRecord>& train_set,
                     const std::vector<DatasetRecord>& val_set,
                     const std::function<void(const EpochLog&)>& on_epoch = {}) {
  cfg.validate();
  TrainResult<T> result;
  result.model = make_model<T>(cfg, train_set);
  model::RecipeModel<T>& m = *result.model;
  std::vector<model::TrainingTargets> targets;
  for (const auto& r : train_set) targets.push_back(m.targets(r));
  nn::AdamState<T> adam;
  std::vector<std::size_t> order(train_set.size());
  std::map<std::string, nn::Matrix<T>> best_values;
  int since_best = 0;

  for (int epoch = 0; epoch < cfg.training.max_epochs; ++epoch) {
    EpochLog log;
    log.epoch = epoch + 1;
    log.lr = cfg.optimizer.lr_for_epoch(epoch);
    log.tau = cfg.model.tau_for_epoch(epoch, cfg.training.max_epochs);
    std::iota(order.begin(), order.end(), std::size_t{0});
    nn::Rng rng(synth::mix_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t b = 0; b < order.size(); b += static_cast<std::size_t>(cfg.training.batch_size)) {
      const std::size_t e = std::min(order.size(), b + static_cast<std::size_t>(cfg.training.batch_size));
      m.parameters().zero_grad();
      for (std::size_t i = b; i < e; ++i) {
        nn::Tape<T> tape;
        const auto& rec = train_set[order[i]];
        model::LossTerms<T> l = m.loss(tape, rec, targets[order[i]], rng, static_cast<T>(log.tau));
        tape.backward(l.total, T(1) / static_cast<T>(e - b));
        log.event += static_cast<double>(l.event.item());
        log.sentence += static_cast<double>(l.sentence.item());
        log.vsim += static_cast<double>(l.vsim.item());
        log.tattn += static_cast<double>(l.tattn.item());
        log.total += static_cast<double>(l.total.item());
      }
      nn::adam_step(m.parameters(), cfg.optimizer, adam, log.lr);
    }
    const double n = static_cast<double>(std::max<std::size_t>(1, train_set.size()));
    log.event /= n, log.sentence /= n, log.vsim /= n, log.tattn /= n, log.total /= n;

    bool improved = val_set.empty();
    if (!val_set.empty()) {
      log.validation = eval::evaluate_corpus(predict_all(m, val_set), val_set).metrics;
      const double v = log.validation.at(cfg.training.early_stop_metric);
      improved = result.best_epoch < 0 || v > result.best_metric;
      if (improved) result.best_metric = v;
    }
    if (improved) {
      result.best_epoch = log.epoch;
      best_values = m.parameters().snapshot();
      result.best_checkpoint = model::checkpoint_to_json(
          m, {cfg.seed, log.epoch, cfg.training.early_stop_metric, result.best_metric}, &adam);
      since_best = 0;
    } else {
      ++since_best;
    }
    result.log.push_back(log);
    if (on_epoch) on_epoch(log);
    if (cfg.training.patience > 0 && since_best >= cfg.training.patience) break;
  }
  m.parameters().restore(best_values);
  return result;
}

}  // namespace recipegen::harness

#endif  // RECIPEGEN_HARNESS_TRAIN_HPP_
