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

#ifndef RECIPEGEN_NN_SERIALIZE_HPP_
#define RECIPEGEN_NN_SERIALIZE_HPP_

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "recipegen/core/error.hpp"
#include "recipegen/nn/adam.hpp"
#include "recipegen/nn/tape.hpp"

namespace recipegen::nn {

template <typename T>
nlohmann::json matrix_to_json(const Matrix<T>& m) {
  std::vector<double> data(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.size(); ++i) data[static_cast<std::size_t>(i)] = static_cast<double>(m.data()[i]);
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

template <typename T>
Matrix<T> matrix_from_json(const nlohmann::json& j, const std::string& what) {
  try {
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    const auto& data = j.at("data");
    if (rows < 0 || cols < 0 || static_cast<Index>(data.size()) != rows * cols)
      throw ValidationError(what + ": data length does not match shape");
    Matrix<T> m(rows, cols);
    for (Index i = 0; i < rows * cols; ++i) m.data()[i] = static_cast<T>(data[static_cast<std::size_t>(i)].get<double>());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

template <typename T>
nlohmann::json parameters_to_json(const ParameterStore<T>& store) {
  nlohmann::json j = nlohmann::json::object();
  store.for_each([&](const Parameter<T>& p) { j[p.name] = matrix_to_json(p.value); });
  return j;
}

// Every stored parameter must be present with a matching shape.
template <typename T>
void parameters_from_json(ParameterStore<T>& store, const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("parameters: expected an object");
  std::size_t seen = 0;
  store.for_each([&](Parameter<T>& p) {
    if (!j.contains(p.name)) throw ValidationError("parameters: missing '" + p.name + "'");
    Matrix<T> m = matrix_from_json<T>(j.at(p.name), "parameter '" + p.name + "'");
    if (m.rows() != p.value.rows() || m.cols() != p.value.cols())
      throw ValidationError("parameter '" + p.name + "': shape mismatch");
    p.value = std::move(m);
    ++seen;
  });
  if (seen != j.size()) throw ValidationError("parameters: unexpected extra entries");
}

template <typename T>
nlohmann::json adam_to_json(const AdamState<T>& s) {
  nlohmann::json m = nlohmann::json::object(), v = nlohmann::json::object();
  for (const auto& [k, x] : s.m) m[k] = matrix_to_json(x);
  for (const auto& [k, x] : s.v) v[k] = matrix_to_json(x);
  return {{"step", s.step}, {"m", m}, {"v", v}};
}

template <typename T>
AdamState<T> adam_from_json(const nlohmann::json& j) {
  AdamState<T> s;
  try {
    s.step = j.at("step").get<long>();
    for (const auto& [k, x] : j.at("m").items()) s.m[k] = matrix_from_json<T>(x, "optimizer m '" + k + "'");
    for (const auto& [k, x] : j.at("v").items()) s.v[k] = matrix_from_json<T>(x, "optimizer v '" + k + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("optimizer state: ") + e.what());
  }
  return s;
}

}  // namespace recipegen::nn

#endif  // RECIPEGEN_NN_SERIALIZE_HPP_
