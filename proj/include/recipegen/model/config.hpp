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

#ifndef RECIPEGEN_MODEL_CONFIG_HPP_
#define RECIPEGEN_MODEL_CONFIG_HPP_

#include <algorithm>
#include <cmath>
#include <string>

#include "json.hpp"
#include "recipegen/core/error.hpp"
#include "recipegen/core/types.hpp"

namespace recipegen::model {

// B: base model. BI adds ingredient encoders, BIV the visual simulator and
// BIVT the textual attention.
enum class Variant { kB, kBI, kBIV, kBIVT };

inline Variant parse_variant(const std::string& s) {
  if (s == "B") return Variant::kB;
  if (s == "BI") return Variant::kBI;
  if (s == "BIV") return Variant::kBIV;
  if (s == "BIVT") return Variant::kBIVT;
  throw ConfigError("unknown model variant '" + s + "' (expected B|BI|BIV|BIVT)");
}

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::kB: return "B";
    case Variant::kBI: return "BI";
    case Variant::kBIV: return "BIV";
    case Variant::kBIVT: return "BIVT";
  }
  return "?";
}

inline bool uses_ingredients(Variant v) { return v != Variant::kB; }
inline bool uses_simulator(Variant v) { return v == Variant::kBIV || v == Variant::kBIVT; }
inline bool uses_textual_attention(Variant v) { return v == Variant::kBIVT; }

enum class MemoryUpdate { kMix, kSeparate };
enum class Conditioning { kTeacherForced, kFreeRunning };
enum class VsimNegatives { kSkip, kNullEvent };

struct ModelConfig {
  Variant variant = Variant::kB;
  std::string preset = "toy";
  int hidden = 64;
  int layers = 2;
  int heads = 4;
  int ff = 128;
  int memory_slots = 1;
  MemoryUpdate memory_update = MemoryUpdate::kMix;
  bool no_reselect = true;
  Conditioning conditioning = Conditioning::kTeacherForced;
  double tau = 1.0;
  double tau_final = 0.5;
  bool tau_anneal = false;
  bool hard = true;
  VsimNegatives vsim_negatives = VsimNegatives::kSkip;
  int max_steps = static_cast<int>(kDefaultMaxSteps);
  int max_sentence_len = static_cast<int>(kDefaultMaxSentenceLen);

  void apply_preset(const std::string& name) {
    if (name == "toy") {
      hidden = 64, layers = 2, heads = 4, ff = 128;
    } else if (name == "full") {
      hidden = 768, layers = 2, heads = 12, ff = 3072;
    } else if (name != "custom") {
      throw ConfigError("unknown model preset '" + name + "' (expected toy|full|custom)");
    }
    preset = name;
  }

  void validate() const {
    if (hidden < 1 || layers < 1 || heads < 1 || ff < 1 || memory_slots < 1)
      throw ConfigError("model: dimensions must be positive");
    if (hidden % heads != 0) throw ConfigError("model: hidden must be divisible by heads");
    if (!(tau > 0.0) || !(tau_final > 0.0)) throw ConfigError("model: tau must be positive");
    if (max_steps < 1 || max_sentence_len < 1) throw ConfigError("model: max lengths must be positive");
  }

  // Temperature for a 0-based epoch: constant, or an exponential anneal from
  // tau to tau_final over `epochs`.
  double tau_for_epoch(int epoch, int epochs) const {
    if (!tau_anneal || epochs <= 1) return tau;
    const double frac = std::min(1.0, static_cast<double>(epoch) / (epochs - 1));
    return tau * std::pow(tau_final / tau, frac);
  }
};

inline nlohmann::json to_json(const ModelConfig& c) {
  return {{"variant", to_string(c.variant)},
          {"preset", c.preset},
          {"hidden", c.hidden},
          {"layers", c.layers},
          {"heads", c.heads},
          {"ff", c.ff},
          {"memory_slots", c.memory_slots},
          {"memory_update", c.memory_update == MemoryUpdate::kMix ? "mix" : "separate"},
          {"no_reselect", c.no_reselect},
          {"conditioning", c.conditioning == Conditioning::kTeacherForced ? "teacher-forced" : "free-running"},
          {"tau", c.tau},
          {"tau_final", c.tau_final},
          {"tau_anneal", c.tau_anneal},
          {"hard", c.hard},
          {"vsim_negatives", c.vsim_negatives == VsimNegatives::kSkip ? "skip" : "null-event"},
          {"max_steps", c.max_steps},
          {"max_sentence_len", c.max_sentence_len}};
}

// A preset sets the dimensions first; explicit dimension keys then override.
inline ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  if (!j.is_object()) throw ConfigError("model: expected an object");
  const nlohmann::json known = to_json(c);
  for (const auto& [k, v] : j.items())
    if (!known.contains(k)) throw ConfigError("model: unknown key '" + k + "'");
  try {
    if (j.contains("preset")) c.apply_preset(j.at("preset").get<std::string>());
    if (j.contains("variant")) c.variant = parse_variant(j.at("variant").get<std::string>());
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    get("hidden", c.hidden);
    get("layers", c.layers);
    get("heads", c.heads);
    get("ff", c.ff);
    get("memory_slots", c.memory_slots);
    get("no_reselect", c.no_reselect);
    get("tau", c.tau);
    get("tau_final", c.tau_final);
    get("tau_anneal", c.tau_anneal);
    get("hard", c.hard);
    get("max_steps", c.max_steps);
    get("max_sentence_len", c.max_sentence_len);
    if (j.contains("memory_update")) {
      const auto s = j.at("memory_update").get<std::string>();
      if (s == "mix") c.memory_update = MemoryUpdate::kMix;
      else if (s == "separate") c.memory_update = MemoryUpdate::kSeparate;
      else throw ConfigError("model.memory_update must be mix|separate");
    }
    if (j.contains("conditioning")) {
      const auto s = j.at("conditioning").get<std::string>();
      if (s == "teacher-forced") c.conditioning = Conditioning::kTeacherForced;
      else if (s == "free-running") c.conditioning = Conditioning::kFreeRunning;
      else throw ConfigError("model.conditioning must be teacher-forced|free-running");
    }
    if (j.contains("vsim_negatives")) {
      const auto s = j.at("vsim_negatives").get<std::string>();
      if (s == "skip") c.vsim_negatives = VsimNegatives::kSkip;
      else if (s == "null-event") c.vsim_negatives = VsimNegatives::kNullEvent;
      else throw ConfigError("model.vsim_negatives must be skip|null-event");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace recipegen::model

#endif  // RECIPEGEN_MODEL_CONFIG_HPP_
