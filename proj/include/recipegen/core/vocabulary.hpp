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

#ifndef RECIPEGEN_CORE_VOCABULARY_HPP_
#define RECIPEGEN_CORE_VOCABULARY_HPP_

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "recipegen/core/error.hpp"
#include "recipegen/core/types.hpp"

namespace recipegen {

// Token <-> id bijection. Ids 0..3 are reserved for PAD, BOS, EOS and UNK.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr int kNumReserved = 4;

  Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

  // Builds from the non-reserved tokens, in id order.
  explicit Vocabulary(const std::vector<std::string>& tokens) {
    for (const char* s : {"<pad>", "<bos>", "<eos>", "<unk>"}) insert(s);
    for (const auto& t : tokens) {
      if (index_.count(t))
        throw ValidationError("vocabulary: duplicate token '" + t + "'");
      insert(t);
    }
  }

  int size() const { return static_cast<int>(tokens_.size()); }

  int id(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnk : it->second;
  }
  bool contains(const std::string& token) const { return index_.count(token) > 0; }

  const std::string& token(int id) const {
    if (id < 0 || id >= size())
      throw ValidationError("vocabulary: id " + std::to_string(id) + " out of range");
    return tokens_[static_cast<std::size_t>(id)];
  }

  std::vector<int> encode(const Tokens& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(id(t));
    return ids;
  }

  // Reserved ids other than UNK are dropped; UNK decodes to "<unk>".
  Tokens decode(const std::vector<int>& ids) const {
    Tokens out;
    for (int i : ids) {
      if (i == kPad || i == kBos || i == kEos) continue;
      out.push_back(token(i));
    }
    return out;
  }

  // Non-reserved tokens in id order (the serialized form).
  std::vector<std::string> regular_tokens() const {
    return {tokens_.begin() + kNumReserved, tokens_.end()};
  }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  void insert(const std::string& t) {
    index_.emplace(t, size());
    tokens_.push_back(t);
  }

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Keeps tokens seen at least `min_count` times, ordered by descending count
// and then lexicographically.
inline Vocabulary build_vocabulary(const std::vector<Tokens>& corpus, int min_count) {
  if (min_count < 1) throw ConfigError("build_vocabulary: min_count must be >= 1");
  if (corpus.empty()) throw ValidationError("build_vocabulary: empty corpus");
  std::map<std::string, int> counts;
  for (const auto& sentence : corpus)
    for (const auto& t : sentence) ++counts[t];
  std::vector<std::pair<std::string, int>> kept;
  const Vocabulary reserved;
  for (const auto& [t, c] : counts)
    if (c >= min_count && !reserved.contains(t)) kept.emplace_back(t, c);
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [t, c] : kept) tokens.push_back(std::move(t));
  return Vocabulary(tokens);
}

}  // namespace recipegen

#endif  // RECIPEGEN_CORE_VOCABULARY_HPP_
