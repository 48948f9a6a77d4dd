// Copyright 2026 The critrec Authors.
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

#include "critrec/numerics/tensor.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "critrec/common/error.h"

namespace critrec {

std::string ShapeToString(const Shape &shape) {
  std::ostringstream out;
  out << "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out << "x";
    out << shape[i];
  }
  out << "]";
  return out.str();
}

int64_t NumElements(const Shape &shape) {
  int64_t n = 1;
  for (int64_t d : shape) n *= d;
  return n;
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)), data_(NumElements(shape_), Real(0)) {}

Tensor::Tensor(Shape shape, std::vector<Real> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (NumElements(shape_) != static_cast<int64_t>(data_.size())) {
    throw Error("shape", "tensor " + ShapeToString(shape_) + " given " +
                             std::to_string(data_.size()) + " values");
  }
}

Tensor Tensor::Vector(std::vector<Real> values) {
  const int64_t n = static_cast<int64_t>(values.size());
  return Tensor({n}, std::move(values));
}

Tensor Tensor::Matrix(int64_t rows, int64_t cols, std::vector<Real> values) {
  return Tensor({rows, cols}, std::move(values));
}

int64_t Tensor::cols() const {
  if (shape_.empty()) return 1;
  if (shape_.size() == 1) return shape_[0];
  int64_t n = 1;
  for (size_t i = 1; i < shape_.size(); ++i) n *= shape_[i];
  return n;
}

Real Tensor::item() const {
  if (data_.size() != 1) {
    throw Error("shape", "item() on tensor " + ShapeToString(shape_));
  }
  return data_[0];
}

void Tensor::Fill(Real value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(), [](Real v) { return std::isfinite(v); });
}

}  // namespace critrec
