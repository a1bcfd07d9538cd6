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

#ifndef RECIPEGEN_NN_OPS_HPP_
#define RECIPEGEN_NN_OPS_HPP_

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "recipegen/nn/tape.hpp"

// Differentiable operations on row-major matrices. Vectors are 1 x n rows.

namespace recipegen::nn {

namespace detail {

inline void require(bool ok, const char* op, const std::string& what) {
  if (!ok) throw ShapeError(std::string(op) + ": " + what);
}

template <typename T>
std::string dims(const Var<T>& v) {
  return std::to_string(v.rows()) + "x" + std::to_string(v.cols());
}

}  // namespace detail

template <typename T>
Var<T> matmul(const Var<T>& a, const Var<T>& b) {
  detail::require(a.cols() == b.rows(), "matmul", detail::dims(a) + " * " + detail::dims(b));
  const int ia = a.id(), ib = b.id();
  Matrix<T> v = a.value() * b.value();
  return a.tape()->record(std::move(v), {a, b}, [ia, ib](Tape<T>& t, int self) {
    const Matrix<T>& g = t.grad(self);
    if (t.requires_grad(ia)) t.accumulate(ia, g * t.value(ib).transpose());
    if (t.requires_grad(ib)) t.accumulate(ib, t.value(ia).transpose() * g);
  });
}

// a * b^T
template <typename T>
Var<T> matmul_nt(const Var<T>& a, const Var<T>& b) {
  detail::require(a.cols() == b.cols(), "matmul_nt", detail::dims(a) + " * " + detail::dims(b) + "^T");
  const int ia = a.id(), ib = b.id();
  Matrix<T> v = a.value() * b.value().transpose();
  return a.tape()->record(std::move(v), {a, b}, [ia, ib](Tape<T>& t, int self) {
    const Matrix<T>& g = t.grad(self);
    if (t.requires_grad(ia)) t.accumulate(ia, g * t.value(ib));
    if (t.requires_grad(ib)) t.accumulate(ib, g.transpose() * t.value(ia));
  });
}

template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "add",
                  detail::dims(a) + " + " + detail::dims(b));
  const int ia = a.id(), ib = b.id();
  Matrix<T> v = a.value() + b.value();
  return a.tape()->record(std::move(v), {a, b}, [ia, ib](Tape<T>& t, int self) {
    t.accumulate(ia, t.grad(self));
    t.accumulate(ib, t.grad(self));
  });
}

template <typename T>
Var<T> sub(const Var<T>& a, const Var<T>& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "sub",
                  detail::dims(a) + " - " + detail::dims(b));
  const int ia = a.id(), ib = b.id();
  Matrix<T> v = a.value() - b.value();
  return a.tape()->record(std::move(v), {a, b}, [ia, ib](Tape<T>& t, int self) {
    t.accumulate(ia, t.grad(self));
    t.accumulate(ib, -t.grad(self));
  });
}

// Element-wise product.
template <typename T>
Var<T> mul(const Var<T>& a, const Var<T>& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(), "mul",
                  detail::dims(a) + " .* " + detail::dims(b));
  const int ia = a.id(), ib = b.id();
  Matrix<T> v = a.value().cwiseProduct(b.value());
  return a.tape()->record(std::move(v), {a, b}, [ia, ib](Tape<T>& t, int self) {
    const Matrix<T>& g = t.grad(self);
    if (t.requires_grad(ia)) t.accumulate(ia, g.cwiseProduct(t.value(ib)));
    if (t.requires_grad(ib)) t.accumulate(ib, g.cwiseProduct(t.value(ia)));
  });
}

// a + row, with the 1 x n row broadcast over every row of a.
template <typename T>
Var<T> add_row(const Var<T>& a, const Var<T>& row) {
  detail::require(row.rows() == 1 && row.cols() == a.cols(), "add_row",
                  detail::dims(a) + " + " + detail::dims(row));
  const int ia = a.id(), ir = row.id();
  Matrix<T> v = a.value().rowwise() + row.value().row(0);
  return a.tape()->record(std::move(v), {a, row}, [ia, ir](Tape<T>& t, int self) {
    const Matrix<T>& g = t.grad(self);
    t.accumulate(ia, g);
    if (t.requires_grad(ir)) t.accumulate(ir, g.colwise().sum());
  });
}

// a .* row, broadcasting the 1 x n row.
template <typename T>
Var<T> mul_row(const Var<T>& a, const Var<T>& row) {
  detail::require(row.rows() == 1 && row.cols() == a.cols(), "mul_row",
                  detail::dims(a) + " .* " + detail::dims(row));
  const int ia = a.id(), ir = row.id();
  Matrix<T> v = a.value().array().rowwise() * row.value().row(0).array();
  return a.tape()->record(std::move(v), {a, row}, [ia, ir](Tape<T>& t, int self) {
    const Matrix<T>& g = t.grad(self);
    if (t.requires_grad(ia))
      t.accumulate(ia, (g.array().rowwise() * t.value(ir).row(0).array()).matrix());
    if (t.requires_grad(ir))
      t.accumulate(ir, g.cwiseProduct(t.value(ia)).colwise().sum());
  });
}

template <typename T>
Var<T> scale(const Var<T>& a, T s) {
  const int ia = a.id();
  Matrix<T> v = a.value() * s;
  return a.tape()->record(std::move(v), {a}, [ia, s](Tape<T>& t, int self) {
    t.accumulate(ia, t.grad(self) * s);
  });
}

template <typename T>
Var<T> sigmoid(const Var<T>& a) {
  const int ia = a.id();
  Matrix<T> v = (T(1) + (-a.value().array()).exp()).inverse().matrix();
  return a.tape()->record(std::move(v), {a}, [ia](Tape<T>& t, int self) {
    const auto y = t.value(self).array();
    t.accumulate(ia, (t.grad(self).array() * y * (T(1) - y)).matrix());
  });
}

template <typename T>
Var<T> tanh(const Var<T>& a) {
  const int ia = a.id();
  Matrix<T> v = a.value().array().tanh().matrix();
  return a.tape()->record(std::move(v), {a}, [ia](Tape<T>& t, int self) {
    const auto y = t.value(self).array();
    t.accumulate(ia, (t.grad(self).array() * (T(1) - y * y)).matrix());
  });
}

template <typename T>
Var<T> relu(const Var<T>& a) {
  const int ia = a.id();
  Matrix<T> v = a.value().cwiseMax(T(0));
  return a.tape()->record(std::move(v), {a}, [ia](Tape<T>& t, int self) {
    const auto mask = (t.value(ia).array() > T(0)).template cast<T>();
    t.accumulate(ia, (t.grad(self).array() * mask).matrix());
  });
}

template <typename T>
Var<T> exp(const Var<T>& a) {
  const int ia = a.id();
  Matrix<T> v = a.value().array().exp().matrix();
  return a.tape()->record(std::move(v), {a}, [ia](Tape<T>& t, int self) {
    t.accumulate(ia, t.grad(self).cwiseProduct(t.value(self)));
  });
}

template <typename T>
Var<T> log(const Var<T>& a) {
  const int ia = a.id();
  Matrix<T> v = a.value().array().log().matrix();
  return a.tape()->record(std::move(v), {a}, [ia](Tape<T>& t, int self) {
    t.accumulate(ia, t.grad(self).cwiseQuotient(t.value(ia)));
  });
}

namespace detail {

// Row-wise softmax of x + mask (mask entries are 0 or -inf).
template <typename T>
Matrix<T> softmax_values(const Matrix<T>& x, const Matrix<T>* mask) {
  Matrix<T> z = mask ? Matrix<T>(x + *mask) : x;
  for (Index r = 0; r < z.rows(); ++r) {
    const T mx = z.row(r).maxCoeff();
    if (!std::isfinite(static_cast<double>(mx))) throw ShapeError("softmax: row fully masked");
    for (Index c = 0; c < z.cols(); ++c)
      z(r, c) = std::isinf(static_cast<double>(z(r, c))) ? T(0) : std::exp(z(r, c) - mx);
    z.row(r) /= z.row(r).sum();
  }
  return z;
}

}  // namespace detail

// Row-wise softmax; `mask`, if given, is added to the logits first.
template <typename T>
Var<T> softmax_rows(const Var<T>& a, const Matrix<T>* mask = nullptr) {
  if (mask)
    detail::require(mask->rows() == a.rows() && mask->cols() == a.cols(), "softmax_rows",
                    "mask shape");
  const int ia = a.id();
  Matrix<T> v = detail::softmax_values(a.value(), mask);
  return a.tape()->record(std::move(v), {a}, [ia](Tape<T>& t, int self) {
    const Matrix<T>& y = t.value(self);
    const Matrix<T>& g = t.grad(self);
    Matrix<T> gy = g.cwiseProduct(y);
    Matrix<T> dx = gy - (y.array().colwise() * gy.rowwise().sum().array()).matrix();
    t.accumulate(ia, dx);
  });
}

template <typename T>
Var<T> log_softmax_rows(const Var<T>& a, const Matrix<T>* mask = nullptr) {
  if (mask)
    detail::require(mask->rows() == a.rows() && mask->cols() == a.cols(), "log_softmax_rows",
                    "mask shape");
  const int ia = a.id();
  Matrix<T> z = mask ? Matrix<T>(a.value() + *mask) : a.value();
  for (Index r = 0; r < z.rows(); ++r) {
    const T mx = z.row(r).maxCoeff();
    if (!std::isfinite(static_cast<double>(mx))) throw ShapeError("log_softmax: row fully masked");
    const T lse = mx + std::log((z.row(r).array() - mx).exp().sum());
    z.row(r).array() -= lse;
  }
  return a.tape()->record(std::move(z), {a}, [ia](Tape<T>& t, int self) {
    const Matrix<T>& g = t.grad(self);
    const Matrix<T> p = t.value(self).array().exp().matrix();
    Matrix<T> dx = g - (p.array().colwise() * g.rowwise().sum().array()).matrix();
    t.accumulate(ia, dx);
  });
}

template <typename T>
Var<T> concat_rows(const std::vector<Var<T>>& parts) {
  detail::require(!parts.empty(), "concat_rows", "no inputs");
  const Index cols = parts.front().cols();
  Index rows = 0;
  for (const auto& p : parts) {
    detail::require(p.cols() == cols, "concat_rows", "column mismatch");
    rows += p.rows();
  }
  Matrix<T> v(rows, cols);
  std::vector<int> ids;
  std::vector<Index> offsets;
  Index r = 0;
  for (const auto& p : parts) {
    v.middleRows(r, p.rows()) = p.value();
    ids.push_back(p.id());
    offsets.push_back(r);
    r += p.rows();
  }
  return parts.front().tape()->record(std::move(v), parts, [ids, offsets](Tape<T>& t, int self) {
    const Matrix<T>& g = t.grad(self);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (!t.requires_grad(ids[k])) continue;
      t.accumulate(ids[k], g.middleRows(offsets[k], t.value(ids[k]).rows()));
    }
  });
}

template <typename T>
Var<T> concat_cols(const std::vector<Var<T>>& parts) {
  detail::require(!parts.empty(), "concat_cols", "no inputs");
  const Index rows = parts.front().rows();
  Index cols = 0;
  for (const auto& p : parts) {
    detail::require(p.rows() == rows, "concat_cols", "row mismatch");
    cols += p.cols();
  }
  Matrix<T> v(rows, cols);
  std::vector<int> ids;
  std::vector<Index> offsets;
  Index c = 0;
  for (const auto& p : parts) {
    v.middleCols(c, p.cols()) = p.value();
    ids.push_back(p.id());
    offsets.push_back(c);
    c += p.cols();
  }
  return parts.front().tape()->record(std::move(v), parts, [ids, offsets](Tape<T>& t, int self) {
    const Matrix<T>& g = t.grad(self);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (!t.requires_grad(ids[k])) continue;
      t.accumulate(ids[k], g.middleCols(offsets[k], t.value(ids[k]).cols()));
    }
  });
}

template <typename T>
Var<T> slice_rows(const Var<T>& a, Index start, Index count) {
  detail::require(start >= 0 && count >= 0 && start + count <= a.rows(), "slice_rows", "range");
  const int ia = a.id();
  Matrix<T> v = a.value().middleRows(start, count);
  return a.tape()->record(std::move(v), {a}, [ia, start, count](Tape<T>& t, int self) {
    t.grad_block(ia, start, 0, count, t.value(ia).cols()) += t.grad(self);
  });
}

template <typename T>
Var<T> slice_cols(const Var<T>& a, Index start, Index count) {
  detail::require(start >= 0 && count >= 0 && start + count <= a.cols(), "slice_cols", "range");
  const int ia = a.id();
  Matrix<T> v = a.value().middleCols(start, count);
  return a.tape()->record(std::move(v), {a}, [ia, start, count](Tape<T>& t, int self) {
    t.grad_block(ia, 0, start, t.value(ia).rows(), count) += t.grad(self);
  });
}

template <typename T>
Var<T> row(const Var<T>& a, Index r) {
  return slice_rows(a, r, 1);
}

template <typename T>
Var<T> transpose(const Var<T>& a) {
  const int ia = a.id();
  Matrix<T> v = a.value().transpose();
  return a.tape()->record(std::move(v), {a}, [ia](Tape<T>& t, int self) {
    t.accumulate(ia, t.grad(self).transpose());
  });
}

// Column-wise maximum over rows (1 x cols). The gradient goes to the first
// row attaining the maximum.
template <typename T>
Var<T> max_rows(const Var<T>& a) {
  detail::require(a.rows() > 0, "max_rows", "empty input");
  const int ia = a.id();
  const Matrix<T>& x = a.value();
  Matrix<T> v(1, x.cols());
  std::vector<Index> arg(static_cast<std::size_t>(x.cols()));
  for (Index c = 0; c < x.cols(); ++c) {
    Index best = 0;
    for (Index r = 1; r < x.rows(); ++r)
      if (x(r, c) > x(best, c)) best = r;
    arg[static_cast<std::size_t>(c)] = best;
    v(0, c) = x(best, c);
  }
  return a.tape()->record(std::move(v), {a}, [ia, arg](Tape<T>& t, int self) {
    const Matrix<T>& g = t.grad(self);
    for (Index c = 0; c < g.cols(); ++c)
      t.grad_block(ia, arg[static_cast<std::size_t>(c)], c, 1, 1)(0, 0) += g(0, c);
  });
}

// Element-wise maximum of equally shaped inputs; ties go to the earliest.
template <typename T>
Var<T> max_elementwise(const std::vector<Var<T>>& parts) {
  detail::require(!parts.empty(), "max_elementwise", "no inputs");
  const Index rows = parts.front().rows(), cols = parts.front().cols();
  for (const auto& p : parts)
    detail::require(p.rows() == rows && p.cols() == cols, "max_elementwise", "shape mismatch");
  Matrix<T> v = parts.front().value();
  std::vector<int> owner(static_cast<std::size_t>(rows * cols), 0);
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const Matrix<T>& x = parts[k].value();
    for (Index i = 0; i < rows * cols; ++i) {
      if (x(i / cols, i % cols) > v(i / cols, i % cols)) {
        v(i / cols, i % cols) = x(i / cols, i % cols);
        owner[static_cast<std::size_t>(i)] = static_cast<int>(k);
      }
    }
  }
  std::vector<int> ids;
  for (const auto& p : parts) ids.push_back(p.id());
  return parts.front().tape()->record(std::move(v), parts, [ids, owner, cols](Tape<T>& t, int self) {
    const Matrix<T>& g = t.grad(self);
    for (Index i = 0; i < g.size(); ++i) {
      const int id = ids[static_cast<std::size_t>(owner[static_cast<std::size_t>(i)])];
      if (t.requires_grad(id)) t.grad_block(id, i / cols, i % cols, 1, 1)(0, 0) += g(i / cols, i % cols);
    }
  });
}

template <typename T>
Var<T> sum(const Var<T>& a) {
  const int ia = a.id();
  Matrix<T> v = Matrix<T>::Constant(1, 1, a.value().sum());
  return a.tape()->record(std::move(v), {a}, [ia](Tape<T>& t, int self) {
    const T g = t.grad(self)(0, 0);
    t.accumulate(ia, Matrix<T>::Constant(t.value(ia).rows(), t.value(ia).cols(), g));
  });
}

// Column-wise mean over rows (1 x cols).
template <typename T>
Var<T> mean_rows(const Var<T>& a) {
  detail::require(a.rows() > 0, "mean_rows", "empty input");
  const int ia = a.id();
  const T inv = T(1) / static_cast<T>(a.rows());
  Matrix<T> v = a.value().colwise().sum() * inv;
  return a.tape()->record(std::move(v), {a}, [ia, inv](Tape<T>& t, int self) {
    Matrix<T> g = t.grad(self).replicate(t.value(ia).rows(), 1) * inv;
    t.accumulate(ia, g);
  });
}

// 1 x 1 element (r, c).
template <typename T>
Var<T> pick(const Var<T>& a, Index r, Index c) {
  detail::require(r >= 0 && r < a.rows() && c >= 0 && c < a.cols(), "pick", "index");
  const int ia = a.id();
  Matrix<T> v = Matrix<T>::Constant(1, 1, a.value()(r, c));
  return a.tape()->record(std::move(v), {a}, [ia, r, c](Tape<T>& t, int self) {
    t.grad_block(ia, r, c, 1, 1)(0, 0) += t.grad(self)(0, 0);
  });
}

// Rows of `table` selected by `ids` (embedding lookup).
template <typename T>
Var<T> gather_rows(const Var<T>& table, const std::vector<int>& ids) {
  Matrix<T> v(static_cast<Index>(ids.size()), table.cols());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    detail::require(ids[k] >= 0 && ids[k] < table.rows(), "gather_rows", "id out of range");
    v.row(static_cast<Index>(k)) = table.value().row(ids[k]);
  }
  const int it = table.id();
  return table.tape()->record(std::move(v), {table}, [it, ids](Tape<T>& t, int self) {
    const Matrix<T>& g = t.grad(self);
    for (std::size_t k = 0; k < ids.size(); ++k)
      t.grad_block(it, ids[k], 0, 1, g.cols()) += g.row(static_cast<Index>(k));
  });
}

// Row-wise layer normalization with learned gain and bias rows.
template <typename T>
Var<T> layer_norm(const Var<T>& x, const Var<T>& gain, const Var<T>& bias, T eps = T(1e-5)) {
  detail::require(gain.rows() == 1 && gain.cols() == x.cols() && bias.rows() == 1 &&
                      bias.cols() == x.cols(),
                  "layer_norm", "gain/bias shape");
  const Index n = x.cols();
  Matrix<T> xhat(x.rows(), n);
  std::vector<T> inv_std(static_cast<std::size_t>(x.rows()));
  for (Index r = 0; r < x.rows(); ++r) {
    const T mu = x.value().row(r).mean();
    const auto centered = (x.value().row(r).array() - mu).matrix();
    const T var = centered.squaredNorm() / static_cast<T>(n);
    inv_std[static_cast<std::size_t>(r)] = T(1) / std::sqrt(var + eps);
    xhat.row(r) = centered * inv_std[static_cast<std::size_t>(r)];
  }
  Matrix<T> v = (xhat.array().rowwise() * gain.value().row(0).array()).matrix();
  v.rowwise() += bias.value().row(0);
  const int ix = x.id(), ig = gain.id(), ib = bias.id();
  return x.tape()->record(
      std::move(v), {x, gain, bias}, [ix, ig, ib, xhat, inv_std, n](Tape<T>& t, int self) {
        const Matrix<T>& g = t.grad(self);
        if (t.requires_grad(ig)) t.accumulate(ig, g.cwiseProduct(xhat).colwise().sum());
        if (t.requires_grad(ib)) t.accumulate(ib, g.colwise().sum());
        if (!t.requires_grad(ix)) return;
        Matrix<T> dxhat = (g.array().rowwise() * t.value(ig).row(0).array()).matrix();
        Matrix<T> dx(g.rows(), n);
        for (Index r = 0; r < g.rows(); ++r) {
          const T m1 = dxhat.row(r).mean();
          const T m2 = dxhat.row(r).cwiseProduct(xhat.row(r)).mean();
          dx.row(r) = ((dxhat.row(r).array() - m1 - xhat.row(r).array() * m2) *
                       inv_std[static_cast<std::size_t>(r)])
                          .matrix();
        }
        t.accumulate(ix, dx);
      });
}

// Forward value `hard`, gradient passed unchanged to `soft`.
template <typename T>
Var<T> straight_through(const Matrix<T>& hard, const Var<T>& soft) {
  detail::require(hard.rows() == soft.rows() && hard.cols() == soft.cols(), "straight_through",
                  "shape mismatch");
  const int is = soft.id();
  return soft.tape()->record(hard, {soft}, [is](Tape<T>& t, int self) {
    t.accumulate(is, t.grad(self));
  });
}

template <typename T>
Matrix<T> one_hot(Index size, Index index) {
  Matrix<T> m = Matrix<T>::Zero(1, size);
  m(0, index) = T(1);
  return m;
}

template <typename T>
T neg_infinity() {
  return -std::numeric_limits<T>::infinity();
}

}  // namespace recipegen::nn

#endif  // RECIPEGEN_NN_OPS_HPP_
