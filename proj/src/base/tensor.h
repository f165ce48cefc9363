// src/base/tensor.h

// Copyright 2026  xclone authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef XCLONE_BASE_TENSOR_H_
#define XCLONE_BASE_TENSOR_H_

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "base/rng.h"

namespace xclone {

// Dense row-major real array.  1-D and 2-D shapes cover everything in this
// codebase; training code is 64-bit float throughout.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int64_t> shape);

  static Tensor zeros(std::vector<int64_t> shape) { return Tensor(std::move(shape)); }
  static Tensor full(std::vector<int64_t> shape, double value);
  static Tensor from(std::vector<int64_t> shape, std::vector<double> data);
  static Tensor vec(std::vector<double> data);                  // shape [n]
  static Tensor rowvec(std::vector<double> data);               // shape [1, n]
  static Tensor randn(std::vector<int64_t> shape, Rng* rng, double stddev = 1.0);

  const std::vector<int64_t>& shape() const { return shape_; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  // 2-D accessors; rows()/cols() also accept 1-D tensors as a single row.
  int64_t rows() const;
  int64_t cols() const;
  double& at(int64_t i) { return data_[i]; }
  double at(int64_t i) const { return data_[i]; }
  double& at(int64_t r, int64_t c) { return data_[r * cols() + c]; }
  double at(int64_t r, int64_t c) const { return data_[r * cols() + c]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;
  double l2_norm() const;

  // Flag consumed by the autodiff tape when a tensor is registered as a leaf.
  bool requires_grad = false;

 private:
  std::vector<int64_t> shape_;
  std::vector<double> data_;
};

}  // namespace xclone

#endif  // XCLONE_BASE_TENSOR_H_
