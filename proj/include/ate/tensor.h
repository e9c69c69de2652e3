// Copyright 2026 The ATE Authors.
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

#ifndef ATE_TENSOR_H_
#define ATE_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ate {

using Shape = std::vector<std::size_t>;

std::string ShapeString(const Shape &shape);
std::size_t ShapeSize(const Shape &shape);

// Dense row-major tensor of doubles. Rank 1 is a vector, rank 2 a matrix
// (rows x cols). A scalar is a rank-1 tensor of size 1.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor Vector(std::vector<double> values);
  static Tensor Vector(std::initializer_list<double> values) {
    return Vector(std::vector<double>(values));
  }
  static Tensor Scalar(double value) { return Vector({value}); }
  static Tensor Matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> values);
  static Tensor Identity(std::size_t n);

  const Shape &shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  // Matrix accessors; rank must be 2.
  std::size_t rows() const { return shape_[0]; }
  std::size_t cols() const { return shape_[1]; }
  double &at(std::size_t r, std::size_t c) { return data_[r * shape_[1] + c]; }
  double at(std::size_t r, std::size_t c) const {
    return data_[r * shape_[1] + c];
  }

  double &operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  const std::vector<double> &values() const { return data_; }

  std::span<double> row(std::size_t r) {
    return std::span<double>(data_).subspan(r * shape_[1], shape_[1]);
  }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * shape_[1], shape_[1]);
  }

  bool SameShape(const Tensor &other) const { return shape_ == other.shape_; }
  bool AllFinite() const;
  double SquaredNorm() const;
  void Fill(double value);

  // this += scale * other (shapes must agree).
  void AddScaled(const Tensor &other, double scale = 1.0);

  bool operator==(const Tensor &other) const = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

}  // namespace ate

#endif  // ATE_TENSOR_H_
