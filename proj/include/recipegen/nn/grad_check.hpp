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

#ifndef RECIPEGEN_NN_GRAD_CHECK_HPP_
#define RECIPEGEN_NN_GRAD_CHECK_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "recipegen/nn/tape.hpp"

namespace recipegen::nn {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_parameter;
  Index worst_index = -1;
  double analytic = 0.0;
  double numeric = 0.0;
  long checked = 0;
};

// Compares the tape gradient of a scalar loss with central differences for
// every parameter entry (or every `stride`-th entry). The loss function
// builds its graph on the given tape and must be deterministic.
//   rel = |a - n| / max(|a|, |n|, floor)
template <typename T>
GradCheckResult grad_check(ParameterStore<T>& store, const std::function<Var<T>(Tape<T>&)>& loss,
                           double eps = 1e-6, double floor = 1e-8, Index stride = 1) {
  store.zero_grad();
  {
    Tape<T> tape(true);
    Var<T> l = loss(tape);
    tape.backward(l);
  }
  auto eval = [&]() {
    Tape<T> tape(false);
    return static_cast<double>(loss(tape).item());
  };
  GradCheckResult r;
  store.for_each([&](Parameter<T>& p) {
    for (Index i = 0; i < p.value.size(); i += stride) {
      T& x = p.value.data()[i];
      const T saved = x;
      x = static_cast<T>(static_cast<double>(saved) + eps);
      const double up = eval();
      x = static_cast<T>(static_cast<double>(saved) - eps);
      const double down = eval();
      x = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double analytic = static_cast<double>(p.grad.data()[i]);
      const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
      const double rel = std::abs(analytic - numeric) / denom;
      ++r.checked;
      if (rel > r.max_rel_error) {
        r.max_rel_error = rel;
        r.worst_parameter = p.name;
        r.worst_index = i;
        r.analytic = analytic;
        r.numeric = numeric;
      }
    }
  });
  return r;
}

}  // namespace recipegen::nn

#endif  // RECIPEGEN_NN_GRAD_CHECK_HPP_
