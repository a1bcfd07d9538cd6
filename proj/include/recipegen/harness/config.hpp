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

#ifndef RECIPEGEN_HARNESS_CONFIG_HPP_
#define RECIPEGEN_HARNESS_CONFIG_HPP_

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "recipegen/core/dataset_io.hpp"
#include "recipegen/core/error.hpp"
#include "recipegen/core/text.hpp"
#include "recipegen/eval/report.hpp"
#include "recipegen/model/config.hpp"
#include "recipegen/nn/adam.hpp"
#include "recipegen/synth/world.hpp"

namespace recipegen::harness {

struct TrainingConfig {
  int batch_size = 16;
  int max_epochs = 50;
  std::string early_stop_metric = "soda.cider_d";
  int patience = 0;  // epochs without improvement before stopping; 0 runs every epoch
  double val_fraction = 0.2;
  int vocab_min_count = 1;
};

struct PathsConfig {
  std::string dataset;
  std::string checkpoint;
  std::string out;
  std::string log;
};

struct ExperimentConfig {
  model::ModelConfig model;
  nn::OptimizerConfig optimizer;
  TrainingConfig training;
  int n_candidates = 0;  // 0 keeps every candidate
  std::uint64_t seed = 1;
  std::string precision = "float64";
  std::string lexicon_path;  // empty: the synthetic world's lexicon
  PathsConfig paths;
  synth::WorldConfig synth;

  void validate() const {
    model.validate();
    optimizer.validate();
    if (training.batch_size < 1) throw ConfigError("training.batch_size must be >= 1");
    if (training.max_epochs < 1) throw ConfigError("training.max_epochs must be >= 1");
    if (training.patience < 0) throw ConfigError("training.patience must be >= 0");
    if (training.val_fraction < 0.0 || training.val_fraction >= 1.0)
      throw ConfigError("training.val_fraction must be in [0, 1)");
    if (training.vocab_min_count < 1) throw ConfigError("training.vocab_min_count must be >= 1");
    const auto keys = eval::report_metric_keys();
    if (std::find(keys.begin(), keys.end(), training.early_stop_metric) == keys.end())
      throw ConfigError("training.early_stop_metric '" + training.early_stop_metric +
                        "' is not a key the evaluator emits");
    if (n_candidates < 0) throw ConfigError("n_candidates must be >= 0");
    if (precision != "float64" && precision != "float32")
      throw ConfigError("precision must be float64|float32");
    synth.validate();
  }
};

inline nlohmann::json to_json(const nn::OptimizerConfig& o) {
  return {{"lr", o.lr},         {"beta1", o.beta1},
          {"beta2", o.beta2},   {"eps", o.eps},
          {"weight_decay", o.weight_decay}, {"warmup_epochs", o.warmup_epochs},
          {"grad_clip", o.grad_clip}};
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"model", model::to_json(c.model)},
          {"optimizer", to_json(c.optimizer)},
          {"training",
           {{"batch_size", c.training.batch_size},
            {"max_epochs", c.training.max_epochs},
            {"early_stop_metric", c.training.early_stop_metric},
            {"patience", c.training.patience},
            {"val_fraction", c.training.val_fraction},
            {"vocab_min_count", c.training.vocab_min_count}}},
          {"n_candidates", c.n_candidates},
          {"seed", c.seed},
          {"precision", c.precision},
          {"actions", {{"lexicon_path", c.lexicon_path}}},
          {"paths",
           {{"dataset", c.paths.dataset},
            {"checkpoint", c.paths.checkpoint},
            {"out", c.paths.out},
            {"log", c.paths.log}}},
          {"synth", synth::to_json(c.synth)}};
}

namespace detail {

inline void reject_unknown(const nlohmann::json& j, const nlohmann::json& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!known.contains(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

template <typename V>
void read(const nlohmann::json& j, const char* key, V& field) {
  if (j.contains(key)) field = j.at(key).get<V>();
}

}  // namespace detail

// Missing keys keep their defaults; unknown keys are rejected.
inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  const nlohmann::json known = to_json(c);
  detail::reject_unknown(j, known, "config");
  try {
    if (j.contains("model")) c.model = model::model_config_from_json(j.at("model"));
    if (j.contains("optimizer")) {
      const auto& o = j.at("optimizer");
      detail::reject_unknown(o, known.at("optimizer"), "optimizer");
      detail::read(o, "lr", c.optimizer.lr);
      detail::read(o, "beta1", c.optimizer.beta1);
      detail::read(o, "beta2", c.optimizer.beta2);
      detail::read(o, "eps", c.optimizer.eps);
      detail::read(o, "weight_decay", c.optimizer.weight_decay);
      detail::read(o, "warmup_epochs", c.optimizer.warmup_epochs);
      detail::read(o, "grad_clip", c.optimizer.grad_clip);
    }
    if (j.contains("training")) {
      const auto& t = j.at("training");
      detail::reject_unknown(t, known.at("training"), "training");
      detail::read(t, "batch_size", c.training.batch_size);
      detail::read(t, "max_epochs", c.training.max_epochs);
      detail::read(t, "early_stop_metric", c.training.early_stop_metric);
      detail::read(t, "patience", c.training.patience);
      detail::read(t, "val_fraction", c.training.val_fraction);
      detail::read(t, "vocab_min_count", c.training.vocab_min_count);
    }
    detail::read(j, "n_candidates", c.n_candidates);
    detail::read(j, "seed", c.seed);
    detail::read(j, "precision", c.precision);
    if (j.contains("actions")) {
      detail::reject_unknown(j.at("actions"), known.at("actions"), "actions");
      detail::read(j.at("actions"), "lexicon_path", c.lexicon_path);
    }
    if (j.contains("paths")) {
      const auto& p = j.at("paths");
      detail::reject_unknown(p, known.at("paths"), "paths");
      detail::read(p, "dataset", c.paths.dataset);
      detail::read(p, "checkpoint", c.paths.checkpoint);
      detail::read(p, "out", c.paths.out);
      detail::read(p, "log", c.paths.log);
    }
    if (j.contains("synth")) c.synth = synth::world_config_from_json(j.at("synth"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  return experiment_config_from_json(recipegen::detail::parse_json(recipegen::detail::read_file(path), path));
}

// One action per non-empty line; '#' starts a comment line.
inline std::vector<std::string> load_lexicon(const std::string& path) {
  std::vector<std::string> out;
  const std::string text = recipegen::detail::read_file(path);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string raw = text.substr(pos, nl - pos);
    const std::size_t first = raw.find_first_not_of(" \t\r");
    const std::string line = join_tokens(tokenize(raw));
    if (first != std::string::npos && raw[first] != '#' && !line.empty()) out.push_back(line);
    pos = nl + 1;
  }
  if (out.empty()) throw ValidationError("lexicon file '" + path + "' has no actions");
  return out;
}

inline std::vector<std::string> resolve_lexicon(const ExperimentConfig& c) {
  return c.lexicon_path.empty() ? synth::action_lexicon(c.synth) : load_lexicon(c.lexicon_path);
}

}  // namespace recipegen::harness

#endif  // RECIPEGEN_HARNESS_CONFIG_HPP_
