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

#ifndef RECIPEGEN_EVAL_TIOU_HPP_
#define RECIPEGEN_EVAL_TIOU_HPP_

#include <algorithm>

#include "recipegen/core/types.hpp"

namespace recipegen::eval {

// Temporal intersection over union of two intervals.
inline double tiou(const TimedEvent& a, const TimedEvent& b) {
  const double inter = std::min(a.end, b.end) - std::max(a.start, b.start);
  if (inter <= 0.0) return 0.0;
  const double uni = std::max(a.end, b.end) - std::min(a.start, b.start);
  return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace recipegen::eval

#endif  // RECIPEGEN_EVAL_TIOU_HPP_
