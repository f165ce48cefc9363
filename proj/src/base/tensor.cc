// src/base/tensor.cc

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

#include "base/tensor.h"

#include <cmath>

#include "base/error.h"

namespace xclone {

namespace {
int64_t product(const std::vector<int64_t>& shape) {
  int64_t n = 1;
  for (int64_t d : shape) {
    XC_SHAPE_CHECK(d >= 0, "negative dimension " << d);
    n *= d;
  }
  return n;
}
}  // namespace

Tensor::Tensor(std::vector<int64_t> shape) : shape_(std::move(shape)) {
  data_.assign(product(shape_), 0.0);
}

Tensor Tensor::full(std::vector<int64_t> shape, double value) {
  Tensor t(std::move(shape));
  for (double& x : t.data_) x = value;
  return t;
}

Tensor Tensor::from(std::vector<int64_t> shape, std::vector<double> data) {
  Tensor t;
  t.shape_ = std::move(shape);
  XC_SHAPE_CHECK(product(t.shape_) == static_cast<int64_t>(data.size()),
                 "data length " << data.size() << " does not match shape");
  t.data_ = std::move(data);
  return t;
}

Tensor Tensor::vec(std::vector<double> data) {
  const int64_t n = static_cast<int64_t>(data.size());
  return from({n}, std::move(data));
}

Tensor Tensor::rowvec(std::vector<double> data) {
  const int64_t n = static_cast<int64_t>(data.size());
  return from({1, n}, std::move(data));
}

Tensor Tensor::randn(std::vector<int64_t> shape, Rng* rng, double stddev) {
  Tensor t(std::move(shape));
  for (double& x : t.raw()) x = rng->normal() * stddev;
  return t;
}

int64_t Tensor::rows() const {
  if (shape_.size() == 1) return 1;
  XC_SHAPE_CHECK(shape_.size() == 2, "rows() needs a 1-D or 2-D tensor");
  return shape_[0];
}

int64_t Tensor::cols() const {
  if (shape_.size() == 1) return shape_[0];
  XC_SHAPE_CHECK(shape_.size() == 2, "cols() needs a 1-D or 2-D tensor");
  return shape_[1];
}

bool Tensor::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double Tensor::l2_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

}  // namespace xclone
