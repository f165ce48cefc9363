// src/ad/tape.h

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

#ifndef XCLONE_AD_TAPE_H_
#define XCLONE_AD_TAPE_H_

#include <functional>
#include <vector>

#include "base/error.h"
#include "base/tensor.h"

namespace xclone {
namespace ad {

class Tape;

// Handle to a node on a tape.  Cheap to copy; owns nothing.
struct Var {
  Tape* tape = nullptr;
  int id = -1;
  bool valid() const { return tape != nullptr && id >= 0; }
};

// Dynamic reverse-mode tape.  Rebuilt for every training step; single
// threaded during construction and backward.  Every forward op checks its
// output for non-finite values, so NaNs surface at the op that made them.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Tensor value, bool requires_grad);
  Var leaf(Tensor value) {
    const bool rg = value.requires_grad;
    return leaf(std::move(value), rg);
  }
  Var constant(Tensor value) { return leaf(std::move(value), false); }

  const Tensor& value(Var v) const;
  // Gradient of the last backward() loss w.r.t. v.  Valid only after
  // backward(); returns zeros for grad-requiring nodes the loss never
  // touched.
  Tensor grad(Var v) const;

  // Reverse accumulation from a scalar loss.  A tape supports exactly one
  // backward pass; rebuild the graph for the next step.
  void backward(Var loss);

  size_t size() const { return nodes_.size(); }
  bool backward_done() const { return backward_done_; }

  // --- internals shared with the op implementations ---
  struct Node {
    Tensor value;
    Tensor grad;  // allocated lazily during backward
    bool requires_grad = false;
    bool grad_allocated = false;
    std::function<void(Tape*)> backprop;  // empty for leaves
  };
  Node& node(int id) { return nodes_[id]; }
  const Node& node(int id) const { return nodes_[id]; }
  // Appends an op node; the caller installs node(id).backprop afterwards
  // (the closure needs its own id, which this call returns).
  int add_op(Tensor value, bool requires_grad, const char* opname);
  // Accumulation target for a parent's gradient; allocates on first use.
  Tensor* grad_buf(int id);
  bool wants_grad(int id) const { return nodes_[id].requires_grad; }

 private:
  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

// ---- primitive forward ops (all with exact reverse-mode gradients) ----

Var add(Var a, Var b);               // same shape
Var sub(Var a, Var b);               // same shape
Var mul(Var a, Var b);               // elementwise, same shape
Var add_rowvec(Var a, Var b);        // a[m,n] + row b broadcast over rows
Var scale(Var a, double c);
Var add_const(Var a, double c);
Var matmul(Var a, Var b);            // [m,k] x [k,n]
Var transpose(Var a);
Var tanh(Var a);
Var sigmoid(Var a);
Var relu(Var a);
Var exp(Var a);
Var log(Var a);                      // rejects non-positive inputs
Var softmax_rows(Var a);
Var sum(Var a);                      // -> [1]
Var mean(Var a);                     // -> [1]
Var sum_sq(Var a);                   // -> [1]
Var sum_cols(Var a);                 // [m,n] -> [m,1]
Var sum_rows(Var a);                 // [m,n] -> [1,n]
Var concat_rows(const std::vector<Var>& parts);
Var concat_cols(const std::vector<Var>& parts);
Var concat_vec(const std::vector<Var>& parts);   // 1-D concat
Var slice_rows(Var a, int64_t r0, int64_t r1);
Var slice_cols(Var a, int64_t c0, int64_t c1);
Var reshape(Var a, std::vector<int64_t> shape);
Var l2_normalize(Var a);             // 1-D; rejects zero vectors
Var l2_normalize_rows(Var a);        // per-row; rejects zero rows
Var cosine_similarity(Var a, Var b); // 1-D x 1-D -> [1]
Var mul_scalar(Var a, Var s);        // s is [1]
Var add_scalar(Var a, Var s);        // s is [1]
// 1-D convolution over rows (time), x[T,Cin] * w[k*Cin,Cout] + b[Cout],
// zero padding `pad` rows on both ends.
Var conv1d(Var x, Var w, Var b, int64_t k, int64_t stride, int64_t pad);

}  // namespace ad
}  // namespace xclone

#endif  // XCLONE_AD_TAPE_H_
