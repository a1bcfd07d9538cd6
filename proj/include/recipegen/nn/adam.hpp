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

#ifndef RECIPEGEN_NN_ADAM_HPP_
#define RECIPEGEN_NN_ADAM_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "recipegen/core/error.hpp"
#include "recipegen/nn/tape.hpp"

namespace recipegen::nn {

struct OptimizerConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
  int warmup_epochs = 5;
  double grad_clip = 0.0;  // global L2 norm; 0 disables clipping

  void validate() const {
    if (!(lr > 0.0)) throw ConfigError("optimizer.lr must be > 0");
    if (beta1 < 0.0 || beta1 >= 1.0) throw ConfigError("optimizer.beta1 must be in [0, 1)");
    if (beta2 < 0.0 || beta2 >= 1.0) throw ConfigError("optimizer.beta2 must be in [0, 1)");
    if (!(eps > 0.0)) throw ConfigError("optimizer.eps must be > 0");
    if (weight_decay < 0.0) throw ConfigError("optimizer.weight_decay must be >= 0");
    if (warmup_epochs < 0) throw ConfigError("optimizer.warmup_epochs must be >= 0");
    if (grad_clip < 0.0) throw ConfigError("optimizer.grad_clip must be >= 0");
  }

  // Linear warmup: epoch e (0-based) uses lr * (e + 1) / warmup until the
  // warmup is over, then lr.
  double lr_for_epoch(int epoch) const {
    if (warmup_epochs <= 0) return lr;
    return lr * std::min(1.0, static_cast<double>(epoch + 1) / warmup_epochs);
  }
};

template <typename T>
struct AdamState {
  long step = 0;
  std::map<std::string, Matrix<T>> m;
  std::map<std::string, Matrix<T>> v;
};

template <typename T>
double grad_norm(const ParameterStore<T>& store) {
  double sq = 0.0;
  store.for_each([&](const Parameter<T>& p) {
    if (p.grad.size() > 0) sq += static_cast<double>(p.grad.squaredNorm());
  });
  return std::sqrt(sq);
}

// One Adam update with decoupled weight decay:
//   p -= lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * p)
template <typename T>
void adam_step(ParameterStore<T>& store, const OptimizerConfig& cfg, AdamState<T>& state,
               double lr) {
  ++state.step;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  double clip = 1.0;
  if (cfg.grad_clip > 0.0) {
    const double norm = grad_norm(store);
    if (norm > cfg.grad_clip) clip = cfg.grad_clip / norm;
  }
  store.for_each([&](Parameter<T>& p) {
    if (p.grad.size() == 0) p.zero_grad();
    auto& m = state.m[p.name];
    auto& v = state.v[p.name];
    if (m.size() == 0) m = Matrix<T>::Zero(p.value.rows(), p.value.cols());
    if (v.size() == 0) v = Matrix<T>::Zero(p.value.rows(), p.value.cols());
    const Matrix<T> g = p.grad * static_cast<T>(clip);
    m = static_cast<T>(cfg.beta1) * m + static_cast<T>(1.0 - cfg.beta1) * g;
    v = static_cast<T>(cfg.beta2) * v + static_cast<T>(1.0 - cfg.beta2) * g.cwiseProduct(g);
    for (Index i = 0; i < p.value.rows(); ++i) {
      for (Index j = 0; j < p.value.cols(); ++j) {
        const double mh = static_cast<double>(m(i, j)) / c1;
        const double vh = static_cast<double>(v(i, j)) / c2;
        const double w = static_cast<double>(p.value(i, j));
        p.value(i, j) = static_cast<T>(w - lr * (mh / (std::sqrt(vh) + cfg.eps) + cfg.weight_decay * w));
      }
    }
  });
}

}  // namespace recipegen::nn

#endif  // RECIPEGEN_NN_ADAM_HPP_
