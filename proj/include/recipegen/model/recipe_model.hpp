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

#ifndef RECIPEGEN_MODEL_RECIPE_MODEL_HPP_
#define RECIPEGEN_MODEL_RECIPE_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <vector>

#include "recipegen/core/error.hpp"
#include "recipegen/core/types.hpp"
#include "recipegen/core/vocabulary.hpp"
#include "recipegen/eval/tiou.hpp"
#include "recipegen/extended/ingredients.hpp"
#include "recipegen/extended/labels.hpp"
#include "recipegen/extended/losses.hpp"
#include "recipegen/extended/simulator.hpp"
#include "recipegen/extended/textual_attention.hpp"
#include "recipegen/model/config.hpp"
#include "recipegen/model/encoder.hpp"
#include "recipegen/model/generator.hpp"
#include "recipegen/model/losses.hpp"
#include "recipegen/model/memory_mix.hpp"
#include "recipegen/model/memory_transformer.hpp"
#include "recipegen/model/selector.hpp"
#include "recipegen/oracle/oracle.hpp"

namespace recipegen::model {

// Oracle candidate per gt step. A step whose oracle candidate was already
// taken by an earlier step falls back to the best unused candidate (tIoU,
// then earliest start), so labels stay selectable under the no-reselect mask.
inline std::vector<int> training_events(const DatasetRecord& record) {
  const oracle::OracleAssignment a = oracle::oracle_select(record.candidates, record.steps);
  std::vector<int> out;
  std::set<int> used;
  for (std::size_t t = 0; t < record.steps.size(); ++t) {
    int best = a.indices[t];
    if (used.count(best)) {
      double best_tiou = -1.0;
      for (std::size_t i = 0; i < record.candidates.size(); ++i) {
        const int c = static_cast<int>(i);
        if (used.count(c)) continue;
        const double v = eval::tiou(record.candidates[i].interval, record.steps[t].interval);
        if (v > best_tiou || (v == best_tiou && record.candidates[i].interval.start <
                                                    record.candidates[static_cast<std::size_t>(best)].interval.start)) {
          best = c;
          best_tiou = v;
        }
      }
    }
    used.insert(best);
    out.push_back(best);
  }
  return out;
}

// Everything the training loss needs from one record.
struct TrainingTargets {
  std::vector<int> events;
  std::vector<std::vector<int>> inputs;   // [BOS, w_1..w_K]
  std::vector<std::vector<int>> targets;  // [w_1..w_K, EOS]
  extended::DistantLabels distant;
};

inline TrainingTargets training_targets(const DatasetRecord& record, const Vocabulary& vocab,
                                        const std::vector<std::string>& lexicon) {
  if (record.steps.empty()) throw ValidationError("training: video '" + record.video_id + "' has no steps");
  TrainingTargets tt;
  tt.events = training_events(record);
  for (const auto& step : record.steps) {
    std::vector<int> ids = vocab.encode(step.sentence);
    std::vector<int> in{Vocabulary::kBos};
    in.insert(in.end(), ids.begin(), ids.end());
    ids.push_back(Vocabulary::kEos);
    tt.inputs.push_back(std::move(in));
    tt.targets.push_back(std::move(ids));
  }
  if (!lexicon.empty()) tt.distant = extended::distant_labels(record.ground_truth(), tt.events, lexicon);
  return tt;
}

template <typename T>
struct LossTerms {
  Var<T> event, sentence, vsim, tattn, total;
};

// Recurrent inference state after a step: memories after mixing, ingredient
// state, and the selections so far.
template <typename T>
struct DecodeState {
  MemoryState<T> event_memory;
  MemoryState<T> sentence_memory;
  Matrix<T> ingredient_state;
  std::vector<int> selected;
  int step = 0;
  bool finished = false;

  bool operator==(const DecodeState&) const = default;
};

template <typename T>
struct StepOutput {
  Matrix<T> probabilities;  // 1 x (N + 1), STOP last
  int choice = -1;
  bool stop = false;
  std::vector<int> tokens;
  std::vector<Matrix<T>> token_distributions;  // one 1 x W row per decoded position
};

template <typename T>
class RecipeModel {
 public:
  RecipeModel(const ModelConfig& cfg, Index feature_dim, Vocabulary vocab, std::vector<std::string> lexicon,
              std::uint64_t seed)
      : cfg_(cfg), feature_dim_(feature_dim), vocab_(std::move(vocab)), lexicon_(std::move(lexicon)) {
    cfg_.validate();
    if (feature_dim < 1) throw ConfigError("model: feature dimension must be positive");
    if (uses_simulator(cfg_.variant) && lexicon_.empty())
      throw ConfigError("model: variant " + to_string(cfg_.variant) + " needs a non-empty action lexicon");
    nn::Rng rng(seed);
    const Index d = cfg_.hidden;
    const int w = vocab_.size();
    encoder_ = EventEncoder<T>(store_, "selector.encoder", feature_dim, d, rng);
    selector_ = MemoryTransformer<T>(store_, "selector", cfg_.layers, d, cfg_.heads, cfg_.ff, rng);
    stop_ = &store_.add("selector.stop", nn::normal_init<T>(1, d, 1.0 / std::sqrt(static_cast<double>(d)), rng));
    generator_ = SentenceGenerator<T>(store_, "generator", w, d, cfg_.layers, cfg_.heads, cfg_.ff, rng);
    output_ = nn::Linear<T>(store_, "generator.out", uses_textual_attention(cfg_.variant) ? 3 * d : d, w, rng);
    if (cfg_.memory_update == MemoryUpdate::kMix) mixer_ = MemoryMixer<T>(store_, "memory_mix", d, rng);
    if (uses_ingredients(cfg_.variant)) {
      selector_ingredients_ = extended::IngredientEncoder<T>(store_, "ingredients.selector", w, d, rng);
      generator_ingredients_ = extended::IngredientEncoder<T>(store_, "ingredients.generator", w, d, rng);
    }
    if (uses_simulator(cfg_.variant))
      simulator_ = extended::VisualSimulator<T>(store_, "simulator", static_cast<int>(lexicon_.size()), d, rng);
    if (uses_textual_attention(cfg_.variant)) textual_ = extended::TextualAttention<T>(store_, "textual", d, rng);
    action_ids_ = extended::head_word_ids(lexicon_, vocab_);
  }

  RecipeModel(const RecipeModel&) = delete;
  RecipeModel& operator=(const RecipeModel&) = delete;

  const ModelConfig& config() const { return cfg_; }
  Index feature_dim() const { return feature_dim_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  const std::vector<std::string>& lexicon() const { return lexicon_; }
  nn::ParameterStore<T>& parameters() { return store_; }
  const nn::ParameterStore<T>& parameters() const { return store_; }

  const EventEncoder<T>& encoder() const { return encoder_; }
  const MemoryMixer<T>& mixer() const { return mixer_; }
  const extended::VisualSimulator<T>& simulator() const { return simulator_; }
  const extended::TextualAttention<T>& textual_attention() const { return textual_; }
  const nn::Linear<T>& output() const { return output_; }
  nn::Parameter<T>& stop_embedding() const { return *stop_; }

  TrainingTargets targets(const DatasetRecord& record) const {
    check_record(record);
    return training_targets(record, vocab_, uses_simulator(cfg_.variant) ? lexicon_ : std::vector<std::string>{});
  }

  // Per-video losses. Event selection is forced to the labels in
  // teacher-forced mode and sampled otherwise; sentences are always
  // teacher-forced on the gt tokens.
  LossTerms<T> loss(nn::Tape<T>& tape, const DatasetRecord& record, const TrainingTargets& tt, nn::Rng& rng,
                    T tau) const {
    check_record(record);
    const Context c = context(tape, record);
    const Index n = c.n;
    const auto steps = tt.events.size();
    std::vector<Var<T>> vmem = zero_memory(tape), smem = zero_memory(tape);
    Var<T> state = c.g_sel;
    std::vector<Var<T>> log_probs, act_logits, ing_logits, ing_alpha, act_alpha;
    Var<T> sentence = tape.constant(Matrix<T>::Zero(1, 1));
    std::vector<int> labels = tt.events;
    labels.push_back(static_cast<int>(n));
    std::set<int> labeled, sampled;

    for (std::size_t t = 0; t <= steps; ++t) {
      EventStep ev = event_step(tape, c, vmem, state);
      const int label = labels[t];
      std::set<int> loss_forbidden = cfg_.no_reselect ? labeled : std::set<int>{};
      loss_forbidden.erase(label);
      const Matrix<T> loss_mask = selection_mask<T>(n, loss_forbidden);
      log_probs.push_back(nn::log_softmax_rows(ev.logits, &loss_mask));
      if (t == steps) break;
      if (ev.sim) {
        act_logits.push_back(ev.sim->action.item_logits);
        ing_logits.push_back(ev.sim->ingredient.item_logits);
      }

      Selection<T> sel;
      if (cfg_.conditioning == Conditioning::kTeacherForced) {
        sel = select_event(ev.logits, loss_mask, SelectMode::kTrain, tau, cfg_.hard, rng, label);
      } else {
        Matrix<T> m = selection_mask<T>(n, cfg_.no_reselect ? sampled : std::set<int>{});
        if (static_cast<Index>(sampled.size()) < n) m(0, n) = nn::neg_infinity<T>();
        sel = select_event(ev.logits, m, SelectMode::kTrain, tau, cfg_.hard, rng);
      }
      labeled.insert(label);
      sampled.insert(static_cast<int>(sel.index));
      const Var<T> h = selected_vector(sel, ev.hidden);

      Sentence s = sentence_pass(tape, c, tt.inputs[t], h, smem, ev);
      sentence = nn::add(sentence, loss_sentence(tape, nn::log_softmax_rows(s.logits), tt.targets[t]));
      if (s.ingredient_weights.valid()) {
        ing_alpha.push_back(s.ingredient_weights);
        act_alpha.push_back(s.action_weights);
      }
      std::tie(vmem, smem) = mix(tape, ev.memories, s.memories);
      if (ev.sim) state = ev.sim->next_state;
    }

    LossTerms<T> out;
    out.event = loss_event(tape, log_probs, labels);
    out.sentence = sentence;
    out.total = loss_total(out.event, out.sentence);
    out.vsim = out.tattn = tape.constant(Matrix<T>::Zero(1, 1));
    if (uses_simulator(cfg_.variant)) {
      out.vsim = extended::loss_vsim(tape, act_logits, ing_logits, tt.distant,
                                     cfg_.vsim_negatives == VsimNegatives::kSkip ? extended::Negatives::kSkip
                                                                                  : extended::Negatives::kNullEvent);
      if (uses_textual_attention(cfg_.variant))
        out.tattn = extended::loss_tattn(tape, ing_alpha, act_alpha, tt.targets, c.heads, action_ids_);
      out.total = extended::loss_extended(out.total, out.vsim, out.tattn);
    }
    return out;
  }

  DecodeState<T> initial_state(const DatasetRecord& record) const {
    check_record(record);
    DecodeState<T> s;
    s.event_memory = MemoryState<T>::zeros(cfg_.layers, cfg_.memory_slots, cfg_.hidden);
    s.sentence_memory = s.event_memory;
    if (uses_simulator(cfg_.variant)) {
      nn::Tape<T> tape(false);
      s.ingredient_state = selector_ingredients_(tape, ingredient_tokens(record)).value();
    }
    return s;
  }

  // One inference step: greedy selection, then greedy decoding of the
  // sentence. Resuming from a copy of `state` reproduces later steps exactly.
  StepOutput<T> decode_step(const DatasetRecord& record, DecodeState<T>& state) const {
    if (state.finished) throw Error("decode_step: decoding already finished");
    check_record(record);
    nn::Tape<T> tape(false);
    const Context c = context(tape, record);
    const Index n = c.n;
    std::vector<Var<T>> vmem = memory_vars(tape, state.event_memory);
    std::vector<Var<T>> smem = memory_vars(tape, state.sentence_memory);
    Var<T> g = uses_simulator(cfg_.variant) ? tape.constant(state.ingredient_state) : c.g_sel;
    EventStep ev = event_step(tape, c, vmem, g);
    std::set<int> forbidden;
    if (cfg_.no_reselect) forbidden.insert(state.selected.begin(), state.selected.end());
    const Matrix<T> mask = selection_mask<T>(n, forbidden);
    StepOutput<T> out;
    out.probabilities = nn::detail::softmax_values<T>(ev.logits.value(), &mask);
    nn::Rng unused(0);
    Selection<T> sel = select_event(ev.logits, mask, SelectMode::kInfer, T(1), true, unused);
    out.choice = static_cast<int>(sel.index);
    out.stop = sel.stop;
    if (sel.stop) {
      state.finished = true;
      return out;
    }
    const Var<T> h = selected_vector(sel, ev.hidden);

    std::vector<int> ids{Vocabulary::kBos};
    std::optional<Sentence> last;
    while (true) {
      Sentence s = sentence_pass(tape, c, ids, h, smem, ev);
      last = s;
      if (static_cast<int>(out.tokens.size()) >= cfg_.max_sentence_len) break;
      const Matrix<T> row = s.logits.value().bottomRows(1);
      out.token_distributions.push_back(nn::detail::softmax_values<T>(row, nullptr));
      const int next = greedy_token(row);
      if (next == Vocabulary::kEos) break;
      out.tokens.push_back(next);
      ids.push_back(next);
    }
    auto [v2, s2] = mix(tape, ev.memories, last->memories);
    state.event_memory = memory_values(v2);
    state.sentence_memory = memory_values(s2);
    if (ev.sim) state.ingredient_state = ev.sim->next_state.value();
    state.selected.push_back(out.choice);
    ++state.step;
    if (state.step >= cfg_.max_steps) state.finished = true;
    return out;
  }

  PredictionRecipe infer(const DatasetRecord& record) const {
    PredictionRecipe p;
    p.video_id = record.video_id;
    DecodeState<T> state = initial_state(record);
    while (!state.finished) {
      StepOutput<T> o = decode_step(record, state);
      if (o.stop) break;
      p.selections.push_back(o.choice);
      p.sentences.push_back(vocab_.decode(o.tokens));
      p.intervals.push_back(record.candidates[static_cast<std::size_t>(o.choice)].interval);
    }
    return p;
  }

 private:
  struct Context {
    Var<T> events;  // E (N x d)
    Var<T> g_sel;   // G^0 for the selector (BI and up)
    Var<T> g_gen;   // G^0 for the generator (BI and up)
    Index n = 0;
    std::vector<int> heads;  // ingredient head word ids
  };

  struct EventStep {
    Var<T> hidden;  // H, or the fused representation with the simulator
    std::vector<Var<T>> memories;
    Var<T> logits;
    std::optional<extended::SimulatorOutputs<T>> sim;
  };

  struct Sentence {
    Var<T> logits;  // K x W
    std::vector<Var<T>> memories;
    Var<T> ingredient_weights, action_weights;
  };

  void check_record(const DatasetRecord& record) const {
    if (record.candidates.empty()) throw ValidationError("model: video '" + record.video_id + "' has no candidates");
    if (static_cast<Index>(record.candidates.feature_dim()) != feature_dim_)
      throw ValidationError("model: video '" + record.video_id + "' has feature dim " +
                            std::to_string(record.candidates.feature_dim()) + ", model expects " +
                            std::to_string(feature_dim_));
    if (uses_ingredients(cfg_.variant) && record.ingredients.empty())
      throw ValidationError("model: variant " + to_string(cfg_.variant) + " needs ingredients; video '" +
                            record.video_id + "' has none");
  }

  std::vector<std::vector<int>> ingredient_tokens(const DatasetRecord& record) const {
    return extended::ingredient_ids(record.ingredients, vocab_);
  }

  Context context(nn::Tape<T>& tape, const DatasetRecord& record) const {
    Context c;
    c.events = encoder_(tape, record.candidates, record.duration);
    c.n = c.events.rows();
    if (uses_ingredients(cfg_.variant)) {
      const auto ids = ingredient_tokens(record);
      c.g_sel = selector_ingredients_(tape, ids);
      c.g_gen = generator_ingredients_(tape, ids);
      c.heads = extended::head_word_ids(record.ingredients, vocab_);
    }
    return c;
  }

  std::vector<Var<T>> zero_memory(nn::Tape<T>& tape) const {
    return memory_vars(tape, MemoryState<T>::zeros(cfg_.layers, cfg_.memory_slots, cfg_.hidden));
  }

  // BI feeds G^0 as a prefix to the selector; with the simulator the prefix
  // is the current ingredient state.
  EventStep event_step(nn::Tape<T>& tape, const Context& c, const std::vector<Var<T>>& vmem,
                       const Var<T>& state) const {
    EventStep ev;
    Var<T> x = c.events;
    const Index m = uses_ingredients(cfg_.variant) ? state.rows() : 0;
    if (m) x = nn::concat_rows<T>({state, c.events});
    TransformerResult<T> r = selector_(tape, x, vmem);
    Var<T> h = m ? nn::slice_rows(r.hidden, m, c.n) : r.hidden;
    ev.memories = r.memories;
    if (uses_simulator(cfg_.variant)) {
      ev.sim = simulator_(tape, h, state);
      h = ev.sim->fused;
    }
    ev.hidden = h;
    ev.logits = event_logits(h, pool_memory(r.memories), tape.parameter(*stop_));
    return ev;
  }

  Sentence sentence_pass(nn::Tape<T>& tape, const Context& c, const std::vector<int>& ids, const Var<T>& h,
                         const std::vector<Var<T>>& smem, const EventStep& ev) const {
    Sentence s;
    const bool prefix = uses_ingredients(cfg_.variant);
    GeneratorPass<T> g = generator_(tape, ids, h, smem, prefix ? &c.g_gen : nullptr);
    s.memories = g.memories;
    Var<T> features = g.words;
    if (uses_textual_attention(cfg_.variant)) {
      extended::TextualAttentionOutput<T> ta = textual_(tape, g.words, ev.sim->next_state, ev.sim->action.items);
      features = ta.features;
      s.ingredient_weights = ta.ingredient_weights;
      s.action_weights = ta.action_weights;
    }
    s.logits = output_(tape, features);
    return s;
  }

  std::pair<std::vector<Var<T>>, std::vector<Var<T>>> mix(nn::Tape<T>& tape, const std::vector<Var<T>>& v,
                                                          const std::vector<Var<T>>& s) const {
    if (cfg_.memory_update == MemoryUpdate::kSeparate) return {v, s};
    return mixer_(tape, v, s);
  }

  // Argmax over real tokens and EOS.
  static int greedy_token(const Matrix<T>& row) {
    int best = -1;
    for (Index i = 0; i < row.cols(); ++i) {
      const int id = static_cast<int>(i);
      if (id == Vocabulary::kPad || id == Vocabulary::kBos || id == Vocabulary::kUnk) continue;
      if (best < 0 || row(0, i) > row(0, best)) best = id;
    }
    return best;
  }

  ModelConfig cfg_;
  Index feature_dim_;
  Vocabulary vocab_;
  std::vector<std::string> lexicon_;
  nn::ParameterStore<T> store_;
  EventEncoder<T> encoder_;
  MemoryTransformer<T> selector_;
  nn::Parameter<T>* stop_ = nullptr;
  SentenceGenerator<T> generator_;
  nn::Linear<T> output_;
  MemoryMixer<T> mixer_;
  extended::IngredientEncoder<T> selector_ingredients_, generator_ingredients_;
  extended::VisualSimulator<T> simulator_;
  extended::TextualAttention<T> textual_;
  std::vector<int> action_ids_;
};

}  // namespace recipegen::model

#endif  // RECIPEGEN_MODEL_RECIPE_MODEL_HPP_
