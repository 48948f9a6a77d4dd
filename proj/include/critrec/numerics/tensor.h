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

#ifndef CRITREC_NUMERICS_TENSOR_H_
#define CRITREC_NUMERICS_TENSOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "critrec/common/real.h"

namespace critrec {

using Shape = std::vector<int64_t>;

std::string ShapeToString(const Shape &shape);
int64_t NumElements(const Shape &shape);

// Dense row-major tensor. Most kernels view it as a matrix: rows() is the
// leading dimension (1 for vectors and scalars) and cols() the product of
// the rest.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<Real> data);

  static Tensor Scalar(Real value) { return Tensor({}, {value}); }
  static Tensor Vector(std::vector<Real> values);
  static Tensor Matrix(int64_t rows, int64_t cols, std::vector<Real> values);

  const Shape &shape() const { return shape_; }
  int64_t size() const { return static_cast<int64_t>(data_.size()); }
  int64_t rows() const { return shape_.size() >= 2 ? shape_[0] : 1; }
  int64_t cols() const;
  bool empty() const { return data_.empty(); }

  Real *data() { return data_.data(); }
  const Real *data() const { return data_.data(); }
  std::span<Real> values() { return data_; }
  std::span<const Real> values() const { return data_; }
  std::vector<Real> &storage() { return data_; }
  const std::vector<Real> &storage() const { return data_; }

  Real &operator[](int64_t i) { return data_[i]; }
  Real operator[](int64_t i) const { return data_[i]; }
  Real &at(int64_t r, int64_t c) { return data_[r * cols() + c]; }
  Real at(int64_t r, int64_t c) const { return data_[r * cols() + c]; }
  std::span<Real> row(int64_t r) { return {data_.data() + r * cols(), static_cast<size_t>(cols())}; }
  std::span<const Real> row(int64_t r) const {
    return {data_.data() + r * cols(), static_cast<size_t>(cols())};
  }

  Real item() const;
  void Fill(Real value);
  bool AllFinite() const;

  bool operator==(const Tensor &other) const = default;

 private:
  Shape shape_;
  std::vector<Real> data_;
};

}  // namespace critrec

#endif  // CRITREC_NUMERICS_TENSOR_H_
