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

#ifndef RECIPEGEN_SYNTH_WORLD_HPP_
#define RECIPEGEN_SYNTH_WORLD_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "recipegen/core/error.hpp"
#include "recipegen/core/text.hpp"
#include "recipegen/core/types.hpp"
#include "recipegen/eval/tiou.hpp"

namespace recipegen::synth {

// One cooking action of the templated language. `past` is the state word an
// ingredient carries after the action ("" for actions that leave no state).
struct ActionEntry {
  std::string verb;
  std::string past;
  std::string tail;

  bool operator==(const ActionEntry&) const = default;
};

inline std::vector<ActionEntry> default_actions() {
  return {{"crack", "cracked", "into a bowl"}, {"stir", "stirred", ""},
          {"cut", "cut", "into pieces"},       {"chop", "chopped", ""},
          {"mix", "mixed", "in a bowl"},       {"fry", "fried", "in the pan"},
          {"boil", "boiled", "in the pot"},    {"pour", "", "into the pan"},
          {"add", "", "to the pot"},           {"bake", "baked", "in the oven"}};
}

inline std::vector<std::string> default_ingredients() {
  return {"eggs",   "flour",     "potato",          "tomato",      "onion",
          "garlic", "olive oil", "soy sauce",       "chicken",     "rice",
          "butter", "milk",      "parmesan cheese", "green onion", "carrot",
          "beef",   "pasta",     "salt",            "sugar",       "noodles"};
}

struct WorldConfig {
  int num_videos = 200;
  int num_ingredients = 20;  // prefix of the ingredient pool
  std::vector<std::string> ingredient_pool = default_ingredients();
  std::vector<ActionEntry> actions = default_actions();
  int min_steps = 3;
  int max_steps = 12;
  int min_video_ingredients = 2;
  int max_video_ingredients = 6;
  int feature_dim = 32;
  int n_candidates = 25;
  double min_duration = 60.0;
  double max_duration = 300.0;
  double jitter_sigma = 0.05;   // boundary noise sd as a fraction of the step length
  double min_jitter_tiou = 0.3;
  double distractor_fraction = 0.5;
  double noise_scale = 0.05;
  std::uint64_t seed = 1;
  std::uint64_t semantic_seed = 20240611;

  void validate() const {
    auto fail = [](const std::string& m) { throw ConfigError("world: " + m); };
    if (num_videos < 0) fail("num_videos must be >= 0");
    if (num_ingredients < 1 || num_ingredients > static_cast<int>(ingredient_pool.size()))
      fail("num_ingredients must be in [1, pool size]");
    if (actions.empty()) fail("action lexicon is empty");
    if (min_steps < 1 || max_steps < min_steps || max_steps > static_cast<int>(kDefaultMaxSteps))
      fail("steps range must satisfy 1 <= min_steps <= max_steps <= " + std::to_string(kDefaultMaxSteps));
    if (min_video_ingredients < 1 || max_video_ingredients < min_video_ingredients ||
        max_video_ingredients > num_ingredients)
      fail("per-video ingredient range must lie in [1, num_ingredients]");
    if (feature_dim < 1) fail("feature_dim must be >= 1");
    if (n_candidates < max_steps) fail("n_candidates must be >= max_steps");
    if (!(min_duration > 0.0) || max_duration < min_duration) fail("invalid duration range");
    if (jitter_sigma < 0.0) fail("jitter_sigma must be >= 0");
    if (min_jitter_tiou < 0.0 || min_jitter_tiou > 1.0) fail("min_jitter_tiou must be in [0, 1]");
    if (distractor_fraction < 0.0 || distractor_fraction > 1.0) fail("distractor_fraction must be in [0, 1]");
    if (noise_scale < 0.0) fail("noise_scale must be >= 0");
  }
};

inline nlohmann::json to_json(const WorldConfig& c) {
  nlohmann::json actions = nlohmann::json::array();
  for (const auto& a : c.actions) actions.push_back({{"verb", a.verb}, {"past", a.past}, {"tail", a.tail}});
  return {{"num_videos", c.num_videos},
          {"num_ingredients", c.num_ingredients},
          {"ingredient_pool", c.ingredient_pool},
          {"actions", actions},
          {"min_steps", c.min_steps},
          {"max_steps", c.max_steps},
          {"min_video_ingredients", c.min_video_ingredients},
          {"max_video_ingredients", c.max_video_ingredients},
          {"feature_dim", c.feature_dim},
          {"n_candidates", c.n_candidates},
          {"min_duration", c.min_duration},
          {"max_duration", c.max_duration},
          {"jitter_sigma", c.jitter_sigma},
          {"min_jitter_tiou", c.min_jitter_tiou},
          {"distractor_fraction", c.distractor_fraction},
          {"noise_scale", c.noise_scale},
          {"seed", c.seed},
          {"semantic_seed", c.semantic_seed}};
}

// Missing keys keep their defaults; unknown keys are rejected.
inline WorldConfig world_config_from_json(const nlohmann::json& j) {
  WorldConfig c;
  if (!j.is_object()) throw ConfigError("world: expected an object");
  const nlohmann::json defaults = to_json(c);
  for (const auto& [k, v] : j.items())
    if (!defaults.contains(k)) throw ConfigError("world: unknown key '" + k + "'");
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    get("num_videos", c.num_videos);
    get("num_ingredients", c.num_ingredients);
    get("ingredient_pool", c.ingredient_pool);
    if (j.contains("actions")) {
      c.actions.clear();
      for (const auto& a : j.at("actions"))
        c.actions.push_back({a.at("verb").get<std::string>(), a.value("past", std::string()),
                             a.value("tail", std::string())});
    }
    get("min_steps", c.min_steps);
    get("max_steps", c.max_steps);
    get("min_video_ingredients", c.min_video_ingredients);
    get("max_video_ingredients", c.max_video_ingredients);
    get("feature_dim", c.feature_dim);
    get("n_candidates", c.n_candidates);
    get("min_duration", c.min_duration);
    get("max_duration", c.max_duration);
    get("jitter_sigma", c.jitter_sigma);
    get("min_jitter_tiou", c.min_jitter_tiou);
    get("distractor_fraction", c.distractor_fraction);
    get("noise_scale", c.noise_scale);
    get("seed", c.seed);
    get("semantic_seed", c.semantic_seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("world: ") + e.what());
  }
  return c;
}

// The action verbs, in lexicon order.
inline std::vector<std::string> action_lexicon(const WorldConfig& c) {
  std::vector<std::string> out;
  for (const auto& a : c.actions) out.push_back(a.verb);
  return out;
}

using Rng = std::mt19937_64;

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// What happens in one ground-truth step. `states[i]` is the state index of
// ingredient i before the step (0 = raw, a + 1 = after action a).
struct StepProgram {
  int action = 0;
  std::vector<int> ingredients;
  std::vector<int> states;
};

// Fixed random vectors for actions, ingredients and states. They depend on
// the semantic seed only, so two worlds with different seeds share meaning.
struct SemanticTable {
  std::vector<std::vector<double>> action, ingredient, state;

  static SemanticTable build(const WorldConfig& c) {
    Rng rng(c.semantic_seed);
    std::normal_distribution<double> n(0.0, 1.0 / std::sqrt(static_cast<double>(c.feature_dim)));
    auto table = [&](std::size_t rows) {
      std::vector<std::vector<double>> t(rows, std::vector<double>(static_cast<std::size_t>(c.feature_dim)));
      for (auto& r : t)
        for (auto& x : r) x = n(rng);
      return t;
    };
    SemanticTable s;
    s.action = table(c.actions.size());
    s.ingredient = table(c.ingredient_pool.size());
    s.state = table(c.actions.size() + 1);
    return s;
  }

  // Unit-norm step embedding: action + mean over ingredients of
  // (ingredient + state).
  std::vector<double> base(const StepProgram& p) const {
    std::vector<double> v = action.at(static_cast<std::size_t>(p.action));
    const double inv = 1.0 / static_cast<double>(std::max<std::size_t>(1, p.ingredients.size()));
    for (std::size_t i = 0; i < p.ingredients.size(); ++i) {
      const auto& g = ingredient.at(static_cast<std::size_t>(p.ingredients[i]));
      const auto& s = state.at(static_cast<std::size_t>(p.states[i]));
      for (std::size_t k = 0; k < v.size(); ++k) v[k] += inv * (g[k] + s[k]);
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0)
      for (double& x : v) x /= norm;
    return v;
  }
};

// Feature of an interval: the step embeddings weighted by tIoU with each
// step, plus Gaussian noise. An interval overlapping no step is pure noise.
inline std::vector<double> featurize_event(const TimedEvent& interval,
                                           const std::vector<RecipeStep>& steps,
                                           const std::vector<StepProgram>& program,
                                           const SemanticTable& table, double noise_scale,
                                           int dim, Rng& rng) {
  std::vector<double> f(static_cast<std::size_t>(dim), 0.0);
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const double w = eval::tiou(interval, steps[t].interval);
    if (w <= 0.0) continue;
    const auto b = table.base(program[t]);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] += w * b[k];
  }
  std::normal_distribution<double> n(0.0, 1.0);
  if (noise_scale > 0.0)
    for (double& x : f) x += noise_scale * n(rng);
  return f;
}

namespace detail {

inline TimedEvent clip(TimedEvent e, double duration) {
  e.start = std::clamp(e.start, 0.0, duration);
  e.end = std::clamp(e.end, 0.0, duration);
  return e;
}

// Gaussian boundary noise with sd sigma * length, resampled until the copy
// keeps tIoU >= min_tiou with its source.
inline TimedEvent jitter(const TimedEvent& src, double sigma, double min_tiou, double duration,
                         Rng& rng) {
  if (sigma <= 0.0) return src;
  std::normal_distribution<double> n(0.0, sigma * src.length());
  for (int attempt = 0; attempt < 100; ++attempt) {
    TimedEvent e = clip({src.start + n(rng), src.end + n(rng)}, duration);
    if (e.end - e.start > 1e-6 && eval::tiou(e, src) >= min_tiou) return e;
  }
  return src;
}

}  // namespace detail

// Candidate proposals for one video. Generation rank r: the first |steps|
// ranks are one jittered copy per step; later ranks are distractors (random
// spans or merged adjacent steps) with probability distractor_fraction and
// wider jittered copies otherwise. The result is sorted by start time, so
// nested subsets by rank keep every earlier proposal.
inline EventCandidateSet propose_candidates(const std::vector<RecipeStep>& steps,
                                            const std::vector<StepProgram>& program,
                                            double duration, const WorldConfig& cfg,
                                            const SemanticTable& table, Rng& rng) {
  const int n = cfg.n_candidates;
  const int t_count = static_cast<int>(steps.size());
  if (n < t_count) throw ConfigError("propose_candidates: fewer candidates than steps");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Candidate> out;
  for (int r = 0; r < n; ++r) {
    TimedEvent e;
    if (r < t_count) {
      e = detail::jitter(steps[static_cast<std::size_t>(r)].interval, cfg.jitter_sigma,
                         cfg.min_jitter_tiou, duration, rng);
    } else if (u(rng) < cfg.distractor_fraction) {
      if (t_count >= 2 && u(rng) < 0.5) {
        const int i = std::uniform_int_distribution<int>(0, t_count - 2)(rng);
        const TimedEvent merged{steps[static_cast<std::size_t>(i)].interval.start,
                                steps[static_cast<std::size_t>(i + 1)].interval.end};
        e = detail::jitter(merged, cfg.jitter_sigma, 0.0, duration, rng);
      } else {
        const double len = duration * (0.02 + 0.28 * u(rng));
        const double start = (duration - len) * u(rng);
        e = {start, start + len};
      }
    } else {
      const int i = std::uniform_int_distribution<int>(0, t_count - 1)(rng);
      e = detail::jitter(steps[static_cast<std::size_t>(i)].interval, 2.0 * cfg.jitter_sigma,
                         cfg.min_jitter_tiou, duration, rng);
    }
    Candidate c;
    c.interval = e;
    c.rank = r;
    c.feature = featurize_event(e, steps, program, table, cfg.noise_scale, cfg.feature_dim, rng);
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return a.interval.start < b.interval.start;
  });
  return EventCandidateSet{std::move(out)};
}

struct GeneratedVideo {
  DatasetRecord record;
  std::vector<StepProgram> program;
};

inline std::string video_id(int index) {
  std::string s = std::to_string(index);
  return "vid" + std::string(s.size() < 5 ? 5 - s.size() : 0, '0') + s;
}

// "<verb> the [state] <ingredient> [and the [state] <ingredient>] [tail]"
inline Tokens step_sentence(const StepProgram& p, const WorldConfig& cfg) {
  const ActionEntry& a = cfg.actions.at(static_cast<std::size_t>(p.action));
  std::string text = a.verb;
  for (std::size_t i = 0; i < p.ingredients.size(); ++i) {
    text += i == 0 ? " the " : " and the ";
    if (p.states[i] > 0) text += cfg.actions.at(static_cast<std::size_t>(p.states[i] - 1)).past + " ";
    text += cfg.ingredient_pool.at(static_cast<std::size_t>(p.ingredients[i]));
  }
  if (!a.tail.empty()) text += " " + a.tail;
  return tokenize(text);
}

inline GeneratedVideo generate_video(const WorldConfig& cfg, const SemanticTable& table, int index) {
  Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(index)));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto uint_in = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  GeneratedVideo v;
  DatasetRecord& r = v.record;
  r.video_id = video_id(index);
  r.duration = cfg.min_duration + (cfg.max_duration - cfg.min_duration) * u(rng);

  std::vector<int> pool(static_cast<std::size_t>(cfg.num_ingredients));
  for (int i = 0; i < cfg.num_ingredients; ++i) pool[static_cast<std::size_t>(i)] = i;
  std::shuffle(pool.begin(), pool.end(), rng);
  const int m = uint_in(cfg.min_video_ingredients, cfg.max_video_ingredients);
  std::vector<int> used(pool.begin(), pool.begin() + m);
  for (int g : used) r.ingredients.push_back(cfg.ingredient_pool[static_cast<std::size_t>(g)]);

  // Program: unused ingredients are introduced in order, each step may pull in
  // a second one, and every ingredient remembers the last action applied.
  const int t_count = uint_in(cfg.min_steps, cfg.max_steps);
  std::vector<int> state(static_cast<std::size_t>(m), 0);
  int next_new = 0;
  for (int t = 0; t < t_count; ++t) {
    StepProgram p;
    p.action = uint_in(0, static_cast<int>(cfg.actions.size()) - 1);
    std::vector<int> local;
    if (next_new < m) {
      local.push_back(next_new++);
    } else {
      local.push_back(uint_in(0, m - 1));
    }
    if (m > 1 && u(rng) < 0.35) {
      int other = uint_in(0, m - 1);
      if (other != local[0]) local.push_back(other);
    }
    for (int i : local) {
      p.ingredients.push_back(used[static_cast<std::size_t>(i)]);
      p.states.push_back(state[static_cast<std::size_t>(i)]);
    }
    const bool leaves_state = !cfg.actions[static_cast<std::size_t>(p.action)].past.empty();
    for (int i : local)
      if (leaves_state) state[static_cast<std::size_t>(i)] = p.action + 1;
    v.program.push_back(std::move(p));
  }

  // Step layout: random lengths and gaps scaled to the video duration.
  std::vector<double> lens, gaps;
  double total = 0.0;
  for (int t = 0; t < t_count; ++t) total += lens.emplace_back(1.0 + 2.0 * u(rng));
  for (int t = 0; t <= t_count; ++t) total += gaps.emplace_back(0.2 + 0.8 * u(rng));
  const double scale = r.duration / total;
  double cursor = 0.0;
  for (int t = 0; t < t_count; ++t) {
    cursor += gaps[static_cast<std::size_t>(t)] * scale;
    const double start = cursor;
    cursor += lens[static_cast<std::size_t>(t)] * scale;
    r.steps.push_back({{start, cursor}, step_sentence(v.program[static_cast<std::size_t>(t)], cfg)});
  }
  r.candidates = propose_candidates(r.steps, v.program, r.duration, cfg, table, rng);
  return v;
}

// Videos are independent, each seeded from (seed, index), and returned in
// video_id order.
inline std::vector<DatasetRecord> generate_world(const WorldConfig& cfg) {
  cfg.validate();
  const SemanticTable table = SemanticTable::build(cfg);
  std::vector<DatasetRecord> out;
  out.reserve(static_cast<std::size_t>(cfg.num_videos));
  for (int i = 0; i < cfg.num_videos; ++i) out.push_back(generate_video(cfg, table, i).record);
  return out;
}

}  // namespace recipegen::synth

#endif  // RECIPEGEN_SYNTH_WORLD_HPP_
