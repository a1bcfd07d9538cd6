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

#ifndef RECIPEGEN_CORE_DATASET_IO_HPP_
#define RECIPEGEN_CORE_DATASET_IO_HPP_

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "recipegen/core/error.hpp"
#include "recipegen/core/text.hpp"
#include "recipegen/core/types.hpp"

namespace recipegen {

using Json = nlohmann::json;

struct LoadOptions {
  std::size_t max_sentence_len = kDefaultMaxSentenceLen;
  std::size_t max_steps = kDefaultMaxSteps;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

// Parses JSON text, converting syntax errors to ParseError with a line and
// column derived from the byte offset.
inline Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << origin << ": parse error at line " << line << ", column " << col << ": "
        << e.what();
    throw ParseError(msg.str());
  }
}

[[noreturn]] inline void invalid(const std::string& video_id, const std::string& field,
                                 const std::string& what) {
  throw ValidationError("record '" + video_id + "' field '" + field + "': " + what);
}

inline double number_field(const Json& obj, const char* key, const std::string& vid,
                           const std::string& field) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number())
    invalid(vid, field + key, "missing or not a number");
  return obj.at(key).get<double>();
}

inline TimedEvent interval_field(const Json& obj, const std::string& vid,
                                 const std::string& field) {
  TimedEvent ev{number_field(obj, "start", vid, field + "."),
                number_field(obj, "end", vid, field + ".")};
  if (ev.start < 0.0) invalid(vid, field + ".start", "negative start");
  if (!(ev.start < ev.end)) invalid(vid, field, "start >= end");
  return ev;
}

inline Json interval_json(const TimedEvent& ev) {
  return Json{{"start", ev.start}, {"end", ev.end}};
}

}  // namespace detail

// Validates and converts one dataset object. Overlapping steps are allowed
// and reported through `warnings`.
inline DatasetRecord record_from_json(const Json& j, const LoadOptions& opt,
                                      std::vector<std::string>* warnings = nullptr) {
  using detail::invalid;
  if (!j.is_object()) throw ValidationError("dataset entry is not an object");
  if (!j.contains("video_id") || !j.at("video_id").is_string())
    throw ValidationError("dataset entry without string video_id");
  DatasetRecord r;
  r.video_id = j.at("video_id").get<std::string>();
  const std::string& vid = r.video_id;
  if (vid.empty()) throw ValidationError("dataset entry with empty video_id");
  r.duration = detail::number_field(j, "duration", vid, "");
  if (!(r.duration > 0.0)) invalid(vid, "duration", "must be positive");

  if (!j.contains("candidates") || !j.at("candidates").is_array())
    invalid(vid, "candidates", "missing array");
  const Json& cands = j.at("candidates");
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const std::string f = "candidates[" + std::to_string(i) + "]";
    const Json& c = cands[i];
    Candidate cand;
    cand.interval = detail::interval_field(c, vid, f);
    if (!c.contains("feature") || !c.at("feature").is_array())
      invalid(vid, f + ".feature", "missing array");
    for (const Json& x : c.at("feature")) {
      if (!x.is_number()) invalid(vid, f + ".feature", "non-numeric entry");
      cand.feature.push_back(x.get<double>());
    }
    cand.rank = static_cast<int>(i);
    if (c.contains("rank")) {
      if (!c.at("rank").is_number_integer()) invalid(vid, f + ".rank", "not an integer");
      cand.rank = c.at("rank").get<int>();
    }
    if (c.contains("sentence")) {
      if (!c.at("sentence").is_string()) invalid(vid, f + ".sentence", "not a string");
      cand.sentence = tokenize(c.at("sentence").get<std::string>());
      if (cand.sentence.size() > opt.max_sentence_len) cand.sentence.resize(opt.max_sentence_len);
    }
    if (!r.candidates.empty()) {
      if (cand.feature.size() != r.candidates.feature_dim())
        invalid(vid, f + ".feature", "dimension differs from candidates[0]");
      if (cand.interval.start < r.candidates.candidates.back().interval.start)
        invalid(vid, f + ".start", "candidates not sorted by start time");
    }
    r.candidates.candidates.push_back(std::move(cand));
  }

  if (!j.contains("steps") || !j.at("steps").is_array() || j.at("steps").empty())
    invalid(vid, "steps", "missing or empty array");
  const Json& steps = j.at("steps");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string f = "steps[" + std::to_string(i) + "]";
    RecipeStep step;
    step.interval = detail::interval_field(steps[i], vid, f);
    if (!steps[i].contains("sentence") || !steps[i].at("sentence").is_string())
      invalid(vid, f + ".sentence", "missing string");
    step.sentence = tokenize(steps[i].at("sentence").get<std::string>());
    if (step.sentence.empty()) invalid(vid, f + ".sentence", "no tokens");
    if (step.sentence.size() > opt.max_sentence_len) step.sentence.resize(opt.max_sentence_len);
    if (!r.steps.empty()) {
      const TimedEvent& prev = r.steps.back().interval;
      if (step.interval.start < prev.start) invalid(vid, f + ".start", "steps not ordered by start");
      if (warnings && step.interval.start < prev.end)
        warnings->push_back("record '" + vid + "': " + f + " overlaps the previous step");
    }
    r.steps.push_back(std::move(step));
  }
  if (r.steps.size() > opt.max_steps) {
    if (warnings)
      warnings->push_back("record '" + vid + "': truncated " + std::to_string(r.steps.size()) +
                          " steps to " + std::to_string(opt.max_steps));
    r.steps.resize(opt.max_steps);
  }

  if (j.contains("ingredients")) {
    if (!j.at("ingredients").is_array()) invalid(vid, "ingredients", "not an array");
    for (const Json& ing : j.at("ingredients")) {
      if (!ing.is_string()) invalid(vid, "ingredients", "non-string entry");
      const Tokens words = tokenize(ing.get<std::string>());
      if (words.empty()) invalid(vid, "ingredients", "empty ingredient");
      r.ingredients.push_back(join_tokens(words));
    }
  }
  return r;
}

inline Json record_to_json(const DatasetRecord& r) {
  Json cands = Json::array();
  for (const auto& c : r.candidates.candidates) {
    Json cj = detail::interval_json(c.interval);
    cj["feature"] = c.feature;
    cj["rank"] = c.rank;
    if (!c.sentence.empty()) cj["sentence"] = join_tokens(c.sentence);
    cands.push_back(std::move(cj));
  }
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    Json sj = detail::interval_json(s.interval);
    sj["sentence"] = join_tokens(s.sentence);
    steps.push_back(std::move(sj));
  }
  return Json{{"video_id", r.video_id},   {"duration", r.duration}, {"candidates", cands},
              {"steps", steps},           {"ingredients", r.ingredients}};
}

// One compact record per line so diagnostics can point at a line.
inline std::string dataset_to_string(const std::vector<DatasetRecord>& records) {
  std::string out = "[";
  for (std::size_t i = 0; i < records.size(); ++i) {
    out += i ? ",\n" : "\n";
    out += record_to_json(records[i]).dump();
  }
  out += records.empty() ? "]\n" : "\n]\n";
  return out;
}

inline std::vector<DatasetRecord> parse_dataset(const std::string& text, const std::string& origin,
                                                const LoadOptions& opt = {},
                                                std::vector<std::string>* warnings = nullptr) {
  const Json j = detail::parse_json(text, origin);
  if (!j.is_array()) throw ValidationError(origin + ": top level must be an array");
  std::vector<DatasetRecord> out;
  out.reserve(j.size());
  std::set<std::string> seen;
  for (const Json& item : j) {
    out.push_back(record_from_json(item, opt, warnings));
    if (!seen.insert(out.back().video_id).second)
      throw ValidationError("duplicate video_id '" + out.back().video_id + "'");
  }
  std::sort(out.begin(), out.end(),
            [](const DatasetRecord& a, const DatasetRecord& b) { return a.video_id < b.video_id; });
  return out;
}

inline std::vector<DatasetRecord> load_dataset(const std::string& path, const LoadOptions& opt = {},
                                               std::vector<std::string>* warnings = nullptr) {
  return parse_dataset(detail::read_file(path), path, opt, warnings);
}

inline void save_dataset(const std::string& path, const std::vector<DatasetRecord>& records) {
  detail::write_file(path, dataset_to_string(records));
}

// --- predictions -----------------------------------------------------------

inline Json predictions_to_json(const std::vector<PredictionRecipe>& preds) {
  Json arr = Json::array();
  for (const auto& p : preds) {
    Json results = Json::array();
    for (std::size_t i = 0; i < p.size(); ++i) {
      results.push_back(Json{{"index", p.selections[i]},
                             {"start", p.intervals[i].start},
                             {"end", p.intervals[i].end},
                             {"sentence", join_tokens(p.sentences[i])}});
    }
    arr.push_back(Json{{"video_id", p.video_id}, {"results", results}});
  }
  return arr;
}

inline std::string predictions_to_string(const std::vector<PredictionRecipe>& preds) {
  return predictions_to_json(preds).dump(1) + "\n";
}

inline std::vector<PredictionRecipe> parse_predictions(const std::string& text,
                                                       const std::string& origin) {
  const Json j = detail::parse_json(text, origin);
  if (!j.is_array()) throw ValidationError(origin + ": top level must be an array");
  std::vector<PredictionRecipe> out;
  for (const Json& item : j) {
    if (!item.is_object() || !item.contains("video_id") || !item.at("video_id").is_string())
      throw ValidationError(origin + ": prediction entry without string video_id");
    PredictionRecipe p;
    p.video_id = item.at("video_id").get<std::string>();
    if (!item.contains("results") || !item.at("results").is_array())
      detail::invalid(p.video_id, "results", "missing array");
    const Json& results = item.at("results");
    for (std::size_t i = 0; i < results.size(); ++i) {
      const std::string f = "results[" + std::to_string(i) + "]";
      const Json& r = results[i];
      if (!r.contains("index") || !r.at("index").is_number_integer() || r.at("index").get<int>() < 0)
        detail::invalid(p.video_id, f + ".index", "missing or negative integer");
      p.selections.push_back(r.at("index").get<int>());
      p.intervals.push_back(detail::interval_field(r, p.video_id, f));
      if (!r.contains("sentence") || !r.at("sentence").is_string())
        detail::invalid(p.video_id, f + ".sentence", "missing string");
      p.sentences.push_back(tokenize(r.at("sentence").get<std::string>()));
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<PredictionRecipe> load_predictions(const std::string& path) {
  return parse_predictions(detail::read_file(path), path);
}

inline void save_predictions(const std::string& path, const std::vector<PredictionRecipe>& preds) {
  detail::write_file(path, predictions_to_string(preds));
}

// Checks that each index addresses a candidate of the matching record.
inline void validate_prediction(const PredictionRecipe& p, const DatasetRecord& r) {
  if (p.selections.size() != p.sentences.size() || p.selections.size() != p.intervals.size())
    throw ValidationError("prediction '" + p.video_id + "': ragged selections/sentences/intervals");
  for (int idx : p.selections)
    if (idx < 0 || static_cast<std::size_t>(idx) >= r.candidates.size())
      throw ValidationError("prediction '" + p.video_id + "': index " + std::to_string(idx) +
                            " out of range");
}

}  // namespace recipegen

#endif  // RECIPEGEN_CORE_DATASET_IO_HPP_
