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

#ifndef RECIPEGEN_CORE_TEXT_HPP_
#define RECIPEGEN_CORE_TEXT_HPP_

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>

#include "recipegen/core/types.hpp"

namespace recipegen {

// Lowercases, drops ASCII punctuation and splits on whitespace.
inline Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 128 && std::ispunct(c)) continue;
    if (std::isspace(c)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
      continue;
    }
    current.push_back(c < 128 ? static_cast<char>(std::tolower(c)) : ch);
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

inline std::string join_tokens(const Tokens& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

// True if `needle` occurs as a contiguous run inside `hay`.
inline bool contains_run(const Tokens& hay, const Tokens& needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size() && match; ++j)
      match = hay[i + j] == needle[j];
    if (match) return true;
  }
  return false;
}

}  // namespace recipegen

#endif  // RECIPEGEN_CORE_TEXT_HPP_
