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

#ifndef RECIPEGEN_MODEL_CHECKPOINT_HPP_
#define RECIPEGEN_MODEL_CHECKPOINT_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "recipegen/core/dataset_io.hpp"
#include "recipegen/core/error.hpp"
#include "recipegen/core/hash.hpp"
#include "recipegen/model/config.hpp"
#include "recipegen/model/recipe_model.hpp"
#include "recipegen/nn/adam.hpp"
#include "recipegen/nn/serialize.hpp"

namespace recipegen::model {

inline constexpr const char* kCheckpointFormat = "recipegen-checkpoint";
inline constexpr int kCheckpointVersion = 1;

template <typename T>
std::string precision_name() {
  return std::is_same_v<T, double> ? "float64" : "float32";
}

inline std::string config_hash(const ModelConfig& cfg) { return hex64(fnv1a64(to_json(cfg).dump())); }

struct CheckpointMeta {
  std::uint64_t seed = 0;
  int epoch = -1;
  std::string metric;
  double metric_value = 0.0;
};

template <typename T>
nlohmann::json checkpoint_to_json(const RecipeModel<T>& model, const CheckpointMeta& meta,
                                  const nn::AdamState<T>* optimizer = nullptr) {
  nlohmann::json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["precision"] = precision_name<T>();
  j["config_hash"] = config_hash(model.config());
  j["model"] = to_json(model.config());
  j["seed"] = meta.seed;
  j["epoch"] = meta.epoch;
  j["metric"] = {{"name", meta.metric}, {"value", meta.metric_value}};
  j["feature_dim"] = model.feature_dim();
  j["vocabulary"] = model.vocabulary().regular_tokens();
  j["lexicon"] = model.lexicon();
  j["parameters"] = nn::parameters_to_json(model.parameters());
  if (optimizer) j["optimizer"] = nn::adam_to_json(*optimizer);
  return j;
}

template <typename T>
struct LoadedCheckpoint {
  std::unique_ptr<RecipeModel<T>> model;
  CheckpointMeta meta;
  std::optional<nn::AdamState<T>> optimizer;
};

template <typename T>
LoadedCheckpoint<T> checkpoint_from_json(const nlohmann::json& j) {
  LoadedCheckpoint<T> out;
  try {
    if (j.at("format").get<std::string>() != kCheckpointFormat) throw ValidationError("checkpoint: unknown format");
    if (j.at("version").get<int>() != kCheckpointVersion)
      throw ValidationError("checkpoint: unsupported version " + j.at("version").dump());
    if (j.at("precision").get<std::string>() != precision_name<T>())
      throw ValidationError("checkpoint: stored as " + j.at("precision").get<std::string>() + ", requested " +
                            precision_name<T>());
    const ModelConfig cfg = model_config_from_json(j.at("model"));
    if (config_hash(cfg) != j.at("config_hash").get<std::string>())
      throw ValidationError("checkpoint: config hash mismatch");
    out.meta.seed = j.at("seed").get<std::uint64_t>();
    out.meta.epoch = j.at("epoch").get<int>();
    out.meta.metric = j.at("metric").at("name").get<std::string>();
    out.meta.metric_value = j.at("metric").at("value").get<double>();
    out.model = std::make_unique<RecipeModel<T>>(cfg, j.at("feature_dim").get<nn::Index>(),
                                                 Vocabulary(j.at("vocabulary").get<std::vector<std::string>>()),
                                                 j.at("lexicon").get<std::vector<std::string>>(), out.meta.seed);
    nn::parameters_from_json(out.model->parameters(), j.at("parameters"));
    if (j.contains("optimizer")) out.optimizer = nn::adam_from_json<T>(j.at("optimizer"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw ValidationError(std::string("checkpoint: ") + e.what());
  }
  return out;
}

template <typename T>
void save_checkpoint(const std::string& path, const RecipeModel<T>& model, const CheckpointMeta& meta,
                     const nn::AdamState<T>* optimizer = nullptr) {
  detail::write_file(path, checkpoint_to_json(model, meta, optimizer).dump() + "\n");
}

template <typename T>
LoadedCheckpoint<T> load_checkpoint(const std::string& path) {
  return checkpoint_from_json<T>(detail::parse_json(detail::read_file(path), path));
}

}  // namespace recipegen::model

#endif  // RECIPEGEN_MODEL_CHECKPOINT_HPP_
