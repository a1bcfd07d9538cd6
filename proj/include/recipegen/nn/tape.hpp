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

#ifndef RECIPEGEN_NN_TAPE_HPP_
#define RECIPEGEN_NN_TAPE_HPP_

#include <Eigen/Core>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "recipegen/core/error.hpp"

namespace recipegen::nn {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Index = Eigen::Index;

class ShapeError : public Error {
 public:
  using Error::Error;
};

// A named trainable array and its accumulated gradient.
template <typename T>
struct Parameter {
  std::string name;
  Matrix<T> value;
  Matrix<T> grad;

  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
  Index size() const { return value.size(); }
};

// Owns parameters by name. Iteration order is lexicographic by name, which
// keeps optimizer updates and serialization deterministic.
template <typename T>
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore&) = delete;
  ParameterStore& operator=(const ParameterStore&) = delete;

  Parameter<T>& add(const std::string& name, Matrix<T> init) {
    auto p = std::make_unique<Parameter<T>>();
    p->name = name;
    p->value = std::move(init);
    p->zero_grad();
    auto [it, inserted] = params_.emplace(name, std::move(p));
    if (!inserted) throw Error("duplicate parameter '" + name + "'");
    return *it->second;
  }

  bool contains(const std::string& name) const { return params_.count(name) > 0; }

  Parameter<T>& at(const std::string& name) {
    auto it = params_.find(name);
    if (it == params_.end()) throw Error("unknown parameter '" + name + "'");
    return *it->second;
  }
  const Parameter<T>& at(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw Error("unknown parameter '" + name + "'");
    return *it->second;
  }

  template <typename F>
  void for_each(F&& f) {
    for (auto& [name, p] : params_) f(*p);
  }
  template <typename F>
  void for_each(F&& f) const {
    for (const auto& [name, p] : params_) f(static_cast<const Parameter<T>&>(*p));
  }

  void zero_grad() {
    for (auto& [name, p] : params_) p->zero_grad();
  }

  std::size_t size() const { return params_.size(); }

  Index total_elements() const {
    Index n = 0;
    for (const auto& [name, p] : params_) n += p->size();
    return n;
  }

  std::map<std::string, Matrix<T>> snapshot() const {
    std::map<std::string, Matrix<T>> out;
    for (const auto& [name, p] : params_) out.emplace(name, p->value);
    return out;
  }

  void restore(const std::map<std::string, Matrix<T>>& values) {
    for (const auto& [name, v] : values) {
      Parameter<T>& p = at(name);
      if (p.value.rows() != v.rows() || p.value.cols() != v.cols())
        throw ShapeError("restore: shape mismatch for '" + name + "'");
      p.value = v;
    }
  }

 private:
  std::map<std::string, std::unique_ptr<Parameter<T>>> params_;
};

template <typename T>
class Tape;

// Handle to a node on a tape.
template <typename T>
class Var {
 public:
  Var() = default;
  Var(Tape<T>* tape, int id) : tape_(tape), id_(id) {}

  Tape<T>* tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }
  const Matrix<T>& value() const { return tape_->value(id_); }
  Index rows() const { return value().rows(); }
  Index cols() const { return value().cols(); }
  T item() const {
    if (value().size() != 1) throw ShapeError("item() on a non-scalar");
    return value()(0, 0);
  }

 private:
  Tape<T>* tape_ = nullptr;
  int id_ = -1;
};

// Records operations for reverse-mode differentiation. A tape built with
// gradients disabled stores values only.
template <typename T>
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, int)>;

  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) { nodes_.reserve(1024); }
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool grad_enabled() const { return grad_enabled_; }
  std::size_t size() const { return nodes_.size(); }

  Var<T> constant(Matrix<T> value) {
    Node n;
    n.value = std::move(value);
    return push(std::move(n));
  }

  // One leaf node per parameter per tape; it references the stored value.
  Var<T> parameter(Parameter<T>& p) {
    auto it = param_nodes_.find(&p);
    if (it != param_nodes_.end()) return Var<T>(this, it->second);
    Node n;
    n.external = &p.value;
    n.param = &p;
    n.requires_grad = grad_enabled_;
    Var<T> v = push(std::move(n));
    param_nodes_.emplace(&p, v.id());
    return v;
  }

  Var<T> record(Matrix<T> value, std::initializer_list<Var<T>> inputs, BackwardFn backward) {
    Node n;
    n.value = std::move(value);
    if (grad_enabled_) {
      for (const auto& in : inputs) {
        if (in.tape() != this) throw Error("operation mixes tapes");
        if (nodes_[static_cast<std::size_t>(in.id())].requires_grad) n.requires_grad = true;
      }
      if (n.requires_grad) n.backward = std::move(backward);
    }
    return push(std::move(n));
  }

  Var<T> record(Matrix<T> value, const std::vector<Var<T>>& inputs, BackwardFn backward) {
    Node n;
    n.value = std::move(value);
    if (grad_enabled_) {
      for (const auto& in : inputs) {
        if (in.tape() != this) throw Error("operation mixes tapes");
        if (nodes_[static_cast<std::size_t>(in.id())].requires_grad) n.requires_grad = true;
      }
      if (n.requires_grad) n.backward = std::move(backward);
    }
    return push(std::move(n));
  }

  const Matrix<T>& value(int id) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    return n.external ? *n.external : n.value;
  }

  bool requires_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].requires_grad; }

  const Matrix<T>& grad(int id) const { return nodes_[static_cast<std::size_t>(id)].grad; }

  template <typename Expr>
  void accumulate(int id, const Expr& g) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.requires_grad) return;
    if (n.grad.size() == 0) {
      n.grad = g;
    } else {
      n.grad += g;
    }
  }

  // Adds to a sub-block of a node's gradient, allocating it as zeros first.
  Eigen::Block<Matrix<T>> grad_block(int id, Index r, Index c, Index rows, Index cols) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.grad.size() == 0) n.grad.setZero(value(id).rows(), value(id).cols());
    return n.grad.block(r, c, rows, cols);
  }

  // Back-propagates from a scalar root (seed 1) and adds leaf gradients into
  // the parameters. `seed_scale` multiplies the seed.
  void backward(const Var<T>& root, T seed_scale = T(1)) {
    if (!grad_enabled_) throw Error("backward on a tape without gradients");
    if (root.tape() != this) throw Error("backward root from another tape");
    if (root.value().size() != 1) throw ShapeError("backward root must be a scalar");
    Node& r = nodes_[static_cast<std::size_t>(root.id())];
    if (!r.requires_grad) return;
    r.grad = Matrix<T>::Constant(1, 1, seed_scale);
    for (int i = root.id(); i >= 0; --i) {
      Node& n = nodes_[static_cast<std::size_t>(i)];
      if (!n.requires_grad || n.grad.size() == 0) continue;
      if (n.backward) n.backward(*this, i);
      if (n.param) {
        if (n.param->grad.size() == 0) n.param->zero_grad();
        n.param->grad += n.grad;
      }
    }
  }

 private:
  struct Node {
    Matrix<T> value;
    Matrix<T> grad;
    const Matrix<T>* external = nullptr;
    Parameter<T>* param = nullptr;
    bool requires_grad = false;
    BackwardFn backward;
  };

  Var<T> push(Node n) {
    nodes_.push_back(std::move(n));
    return Var<T>(this, static_cast<int>(nodes_.size() - 1));
  }

  bool grad_enabled_;
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter<T>*, int> param_nodes_;
};

}  // namespace recipegen::nn

#endif  // RECIPEGEN_NN_TAPE_HPP_
