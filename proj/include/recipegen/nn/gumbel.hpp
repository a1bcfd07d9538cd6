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

#ifndef RECIPEGEN_NN_GUMBEL_HPP_
#define RECIPEGEN_NN_GUMBEL_HPP_

#include <cmath>
#include <limits>
#include <random>

#include "recipegen/core/error.hpp"
#include "recipegen/nn/layers.hpp"
#include "recipegen/nn/ops.hpp"

namespace recipegen::nn {

// g = -log(-log u), u ~ Uniform(0, 1), as a 1 x k row.
template <typename T>
Matrix<T> sample_gumbel(Index k, Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Matrix<T> g(1, k);
  for (Index i = 0; i < k; ++i) {
    double u = dist(rng);
    if (u <= 0.0) u = std::numeric_limits<double>::min();
    g(0, i) = static_cast<T>(-std::log(-std::log(u)));
  }
  return g;
}

template <typename T>
Index argmax_row(const Matrix<T>& row) {
  Index best = 0;
  for (Index i = 1; i < row.cols(); ++i)
    if (row(0, i) > row(0, best)) best = i;
  return best;
}

template <typename T>
struct GumbelSample {
  Var<T> y;        // one-hot in hard mode, otherwise equal to `soft`
  Var<T> soft;
  Index index = 0;  // argmax of the soft sample, or the forced index
};

// y = softmax((log_probs + noise) / tau). Unnormalized logits give the same
// sample since softmax is shift invariant. Masked entries (-inf in `mask`)
// get weight zero. With `hard`, the forward value is one-hot at `forced`
// when given, else at argmax y, and the gradient follows the soft sample.
template <typename T>
GumbelSample<T> gumbel_softmax(const Var<T>& log_probs, T tau, bool hard, const Matrix<T>& noise,
                               const Matrix<T>* mask = nullptr, Index forced = -1) {
  if (!(tau > T(0))) throw ConfigError("gumbel_softmax: tau must be positive");
  if (log_probs.rows() != 1 || noise.cols() != log_probs.cols() || noise.rows() != 1)
    throw ShapeError("gumbel_softmax: expects matching 1 x k rows");
  Tape<T>& tape = *log_probs.tape();
  Matrix<T> safe_noise = noise;
  if (mask) {
    for (Index i = 0; i < safe_noise.cols(); ++i)
      if (!std::isfinite(static_cast<double>((*mask)(0, i)))) safe_noise(0, i) = T(0);
  }
  for (Index i = 0; i < log_probs.cols(); ++i)
    if (!std::isfinite(static_cast<double>(log_probs.value()(0, i))))
      throw ShapeError("gumbel_softmax: non-finite logit; mask instead");
  Var<T> z = add(log_probs, tape.constant(safe_noise));
  GumbelSample<T> out;
  out.soft = softmax_rows(scale(z, T(1) / tau), mask);
  out.index = forced >= 0 ? forced : argmax_row(out.soft.value());
  out.y = hard ? straight_through(one_hot<T>(log_probs.cols(), out.index), out.soft) : out.soft;
  return out;
}

template <typename T>
GumbelSample<T> gumbel_softmax(const Var<T>& log_probs, T tau, bool hard, Rng& rng,
                               const Matrix<T>* mask = nullptr, Index forced = -1) {
  return gumbel_softmax(log_probs, tau, hard, sample_gumbel<T>(log_probs.cols(), rng), mask,
                        forced);
}

}  // namespace recipegen::nn

#endif  // RECIPEGEN_NN_GUMBEL_HPP_
