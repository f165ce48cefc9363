// src/ad/tape.cc

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

#include "ad/tape.h"

#include <cmath>
#include <utility>

namespace xclone {
namespace ad {

namespace {

constexpr double kNormEps = 1e-12;

void check_same_tape(Var a, Var b) {
  XC_SHAPE_CHECK(a.valid() && b.valid() && a.tape == b.tape,
                 "operands must live on the same tape");
}

void check_finite(const Tensor& t, const char* opname) {
  XC_NUM_CHECK(t.all_finite(), "non-finite values produced by op '" << opname << "'");
}

void axpy(Tensor* out, const Tensor& g, double c) {
  double* o = out->data();
  const double* s = g.data();
  const int64_t n = g.numel();
  for (int64_t i = 0; i < n; ++i) o[i] += c * s[i];
}

}  // namespace

Var Tape::leaf(Tensor value, bool requires_grad) {
  XC_CHECK(!backward_done_, "tape already consumed by backward; build a new tape");
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<int>(nodes_.size()) - 1};
}

const Tensor& Tape::value(Var v) const {
  XC_CHECK(v.tape == this && v.id >= 0 && v.id < static_cast<int>(nodes_.size()),
           "invalid tape handle");
  return nodes_[v.id].value;
}

Tensor Tape::grad(Var v) const {
  XC_CHECK(backward_done_, "grad requested before backward()");
  const Node& n = node(v.id);
  XC_CHECK(n.requires_grad, "grad requested for a node that does not require grad");
  if (!n.grad_allocated) return Tensor(n.value.shape());
  return n.grad;
}

int Tape::add_op(Tensor value, bool requires_grad, const char* opname) {
  XC_CHECK(!backward_done_, "tape already consumed by backward; build a new tape");
  check_finite(value, opname);
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

Tensor* Tape::grad_buf(int id) {
  Node& n = nodes_[id];
  if (!n.grad_allocated) {
    n.grad = Tensor(n.value.shape());
    n.grad_allocated = true;
  }
  return &n.grad;
}

void Tape::backward(Var loss) {
  XC_CHECK(loss.tape == this, "loss var belongs to a different tape");
  XC_CHECK(!backward_done_, "repeated backward on the same tape rejected");
  const Node& ln = node(loss.id);
  XC_SHAPE_CHECK(ln.value.numel() == 1, "backward requires a scalar loss, got "
                                            << ln.value.numel() << " elements");
  XC_CHECK(ln.requires_grad, "loss does not depend on any grad-requiring leaf");
  backward_done_ = true;
  grad_buf(loss.id)->raw()[0] = 1.0;
  for (int id = loss.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.requires_grad || !n.grad_allocated || !n.backprop) continue;
    n.backprop(this);
  }
}

namespace {

// Registers an op node and installs a backprop closure that receives the
// node's own id (not known until after registration).
Var make_op(Tape* tape, Tensor value, bool needs_grad, const char* name,
            std::function<void(Tape*, int)> backprop) {
  const int id = tape->add_op(std::move(value), needs_grad, name);
  if (needs_grad) {
    tape->node(id).backprop = [fn = std::move(backprop), id](Tape* t) { fn(t, id); };
  }
  return Var{tape, id};
}

struct Prep {
  Tape* tape;
  bool needs_grad;
};

Prep prep1(Var a) {
  XC_SHAPE_CHECK(a.valid(), "invalid operand");
  return Prep{a.tape, a.tape->wants_grad(a.id)};
}

Prep prep2(Var a, Var b) {
  check_same_tape(a, b);
  return Prep{a.tape, a.tape->wants_grad(a.id) || a.tape->wants_grad(b.id)};
}

}  // namespace

// ---------------------------------------------------------------------------
// elementwise arithmetic

Var add(Var a, Var b) {
  Prep p = prep2(a, b);
  const Tensor& av = p.tape->value(a);
  const Tensor& bv = p.tape->value(b);
  XC_SHAPE_CHECK(av.same_shape(bv), "add: shape mismatch");
  Tensor out = av;
  for (int64_t i = 0; i < out.numel(); ++i) out.raw()[i] += bv.raw()[i];
  const int aid = a.id, bid = b.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "add",
                 [aid, bid](Tape* t, int self) {
                   const Tensor& g = t->node(self).grad;
                   if (t->wants_grad(aid)) axpy(t->grad_buf(aid), g, 1.0);
                   if (t->wants_grad(bid)) axpy(t->grad_buf(bid), g, 1.0);
                 });
}

Var sub(Var a, Var b) {
  Prep p = prep2(a, b);
  const Tensor& av = p.tape->value(a);
  const Tensor& bv = p.tape->value(b);
  XC_SHAPE_CHECK(av.same_shape(bv), "sub: shape mismatch");
  Tensor out = av;
  for (int64_t i = 0; i < out.numel(); ++i) out.raw()[i] -= bv.raw()[i];
  const int aid = a.id, bid = b.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "sub",
                 [aid, bid](Tape* t, int self) {
                   const Tensor& g = t->node(self).grad;
                   if (t->wants_grad(aid)) axpy(t->grad_buf(aid), g, 1.0);
                   if (t->wants_grad(bid)) axpy(t->grad_buf(bid), g, -1.0);
                 });
}

Var mul(Var a, Var b) {
  Prep p = prep2(a, b);
  const Tensor& av = p.tape->value(a);
  const Tensor& bv = p.tape->value(b);
  XC_SHAPE_CHECK(av.same_shape(bv), "mul: shape mismatch");
  Tensor out = av;
  for (int64_t i = 0; i < out.numel(); ++i) out.raw()[i] *= bv.raw()[i];
  const int aid = a.id, bid = b.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "mul",
                 [aid, bid](Tape* t, int self) {
                   const Tensor& g = t->node(self).grad;
                   const Tensor& av2 = t->node(aid).value;
                   const Tensor& bv2 = t->node(bid).value;
                   if (t->wants_grad(aid)) {
                     Tensor* ga = t->grad_buf(aid);
                     for (int64_t i = 0; i < g.numel(); ++i)
                       ga->raw()[i] += g.raw()[i] * bv2.raw()[i];
                   }
                   if (t->wants_grad(bid)) {
                     Tensor* gb = t->grad_buf(bid);
                     for (int64_t i = 0; i < g.numel(); ++i)
                       gb->raw()[i] += g.raw()[i] * av2.raw()[i];
                   }
                 });
}

Var add_rowvec(Var a, Var b) {
  Prep p = prep2(a, b);
  const Tensor& av = p.tape->value(a);
  const Tensor& bv = p.tape->value(b);
  XC_SHAPE_CHECK(av.ndim() == 2 && bv.numel() == av.cols(),
                 "add_rowvec: need [m,n] plus length-n row");
  Tensor out = av;
  const int64_t m = av.rows(), n = av.cols();
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < n; ++j) out.at(i, j) += bv.at(j);
  const int aid = a.id, bid = b.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "add_rowvec",
                 [aid, bid, m, n](Tape* t, int self) {
                   const Tensor& g = t->node(self).grad;
                   if (t->wants_grad(aid)) axpy(t->grad_buf(aid), g, 1.0);
                   if (t->wants_grad(bid)) {
                     Tensor* gb = t->grad_buf(bid);
                     for (int64_t i = 0; i < m; ++i)
                       for (int64_t j = 0; j < n; ++j) gb->raw()[j] += g.at(i, j);
                   }
                 });
}

Var scale(Var a, double c) {
  Prep p = prep1(a);
  Tensor out = p.tape->value(a);
  for (double& x : out.raw()) x *= c;
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "scale",
                 [aid, c](Tape* t, int self) {
                   if (t->wants_grad(aid)) axpy(t->grad_buf(aid), t->node(self).grad, c);
                 });
}

Var add_const(Var a, double c) {
  Prep p = prep1(a);
  Tensor out = p.tape->value(a);
  for (double& x : out.raw()) x += c;
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "add_const",
                 [aid](Tape* t, int self) {
                   if (t->wants_grad(aid)) axpy(t->grad_buf(aid), t->node(self).grad, 1.0);
                 });
}

// ---------------------------------------------------------------------------
// linear algebra

Var matmul(Var a, Var b) {
  Prep p = prep2(a, b);
  const Tensor& av = p.tape->value(a);
  const Tensor& bv = p.tape->value(b);
  XC_SHAPE_CHECK(av.ndim() == 2 && bv.ndim() == 2 && av.cols() == bv.rows(),
                 "matmul: incompatible shapes [" << av.rows() << "," << av.cols()
                                                 << "] x [" << bv.rows() << ","
                                                 << bv.cols() << "]");
  const int64_t m = av.rows(), k = av.cols(), n = bv.cols();
  Tensor out({m, n});
  {
    const double* A = av.data();
    const double* B = bv.data();
    double* C = out.data();
    for (int64_t i = 0; i < m; ++i) {
      const double* Ai = A + i * k;
      double* Ci = C + i * n;
      for (int64_t kk = 0; kk < k; ++kk) {
        const double aik = Ai[kk];
        if (aik == 0.0) continue;
        const double* Bk = B + kk * n;
        for (int64_t j = 0; j < n; ++j) Ci[j] += aik * Bk[j];
      }
    }
  }
  const int aid = a.id, bid = b.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "matmul",
                 [aid, bid, m, k, n](Tape* t, int self) {
                   const Tensor& g = t->node(self).grad;
                   const Tensor& av2 = t->node(aid).value;
                   const Tensor& bv2 = t->node(bid).value;
                   if (t->wants_grad(aid)) {
                     // dA = g . B^T
                     Tensor* ga = t->grad_buf(aid);
                     const double* G = g.data();
                     const double* B = bv2.data();
                     double* GA = ga->data();
                     for (int64_t i = 0; i < m; ++i) {
                       const double* Gi = G + i * n;
                       double* GAi = GA + i * k;
                       for (int64_t kk = 0; kk < k; ++kk) {
                         const double* Bk = B + kk * n;
                         double s = 0.0;
                         for (int64_t j = 0; j < n; ++j) s += Gi[j] * Bk[j];
                         GAi[kk] += s;
                       }
                     }
                   }
                   if (t->wants_grad(bid)) {
                     // dB = A^T . g
                     Tensor* gb = t->grad_buf(bid);
                     const double* G = g.data();
                     const double* A = av2.data();
                     double* GB = gb->data();
                     for (int64_t i = 0; i < m; ++i) {
                       const double* Gi = G + i * n;
                       const double* Ai = A + i * k;
                       for (int64_t kk = 0; kk < k; ++kk) {
                         const double aik = Ai[kk];
                         if (aik == 0.0) continue;
                         double* GBk = GB + kk * n;
                         for (int64_t j = 0; j < n; ++j) GBk[j] += aik * Gi[j];
                       }
                     }
                   }
                 });
}

Var transpose(Var a) {
  Prep p = prep1(a);
  const Tensor& av = p.tape->value(a);
  XC_SHAPE_CHECK(av.ndim() == 2, "transpose: need 2-D");
  const int64_t m = av.rows(), n = av.cols();
  Tensor out({n, m});
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < n; ++j) out.at(j, i) = av.at(i, j);
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "transpose",
                 [aid, m, n](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const Tensor& g = t->node(self).grad;
                   Tensor* ga = t->grad_buf(aid);
                   for (int64_t i = 0; i < m; ++i)
                     for (int64_t j = 0; j < n; ++j) ga->at(i, j) += g.at(j, i);
                 });
}

// ---------------------------------------------------------------------------
// nonlinearities

Var tanh(Var a) {
  Prep p = prep1(a);
  Tensor out = p.tape->value(a);
  for (double& x : out.raw()) x = std::tanh(x);
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "tanh",
                 [aid](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const Tensor& g = t->node(self).grad;
                   const Tensor& y = t->node(self).value;
                   Tensor* ga = t->grad_buf(aid);
                   for (int64_t i = 0; i < g.numel(); ++i)
                     ga->raw()[i] += g.raw()[i] * (1.0 - y.raw()[i] * y.raw()[i]);
                 });
}

Var sigmoid(Var a) {
  Prep p = prep1(a);
  Tensor out = p.tape->value(a);
  for (double& x : out.raw()) x = 1.0 / (1.0 + std::exp(-x));
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "sigmoid",
                 [aid](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const Tensor& g = t->node(self).grad;
                   const Tensor& y = t->node(self).value;
                   Tensor* ga = t->grad_buf(aid);
                   for (int64_t i = 0; i < g.numel(); ++i)
                     ga->raw()[i] += g.raw()[i] * y.raw()[i] * (1.0 - y.raw()[i]);
                 });
}

Var relu(Var a) {
  Prep p = prep1(a);
  Tensor out = p.tape->value(a);
  for (double& x : out.raw()) x = x > 0.0 ? x : 0.0;
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "relu",
                 [aid](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const Tensor& g = t->node(self).grad;
                   const Tensor& x = t->node(aid).value;
                   Tensor* ga = t->grad_buf(aid);
                   for (int64_t i = 0; i < g.numel(); ++i)
                     if (x.raw()[i] > 0.0) ga->raw()[i] += g.raw()[i];
                 });
}

Var exp(Var a) {
  Prep p = prep1(a);
  Tensor out = p.tape->value(a);
  for (double& x : out.raw()) x = std::exp(x);
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "exp",
                 [aid](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const Tensor& g = t->node(self).grad;
                   const Tensor& y = t->node(self).value;
                   Tensor* ga = t->grad_buf(aid);
                   for (int64_t i = 0; i < g.numel(); ++i)
                     ga->raw()[i] += g.raw()[i] * y.raw()[i];
                 });
}

Var log(Var a) {
  Prep p = prep1(a);
  Tensor out = p.tape->value(a);
  for (double& x : out.raw()) {
    XC_NUM_CHECK(x > 0.0, "log of non-positive value " << x);
    x = std::log(x);
  }
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "log",
                 [aid](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const Tensor& g = t->node(self).grad;
                   const Tensor& x = t->node(aid).value;
                   Tensor* ga = t->grad_buf(aid);
                   for (int64_t i = 0; i < g.numel(); ++i)
                     ga->raw()[i] += g.raw()[i] / x.raw()[i];
                 });
}

Var softmax_rows(Var a) {
  Prep p = prep1(a);
  const Tensor& av = p.tape->value(a);
  XC_SHAPE_CHECK(av.ndim() <= 2 && av.numel() > 0, "softmax_rows: need nonempty 1-D/2-D");
  const int64_t m = av.rows(), n = av.cols();
  Tensor out = av;
  for (int64_t i = 0; i < m; ++i) {
    double* row = out.data() + i * n;
    double mx = row[0];
    for (int64_t j = 1; j < n; ++j) mx = std::max(mx, row[j]);
    double z = 0.0;
    for (int64_t j = 0; j < n; ++j) {
      row[j] = std::exp(row[j] - mx);
      z += row[j];
    }
    for (int64_t j = 0; j < n; ++j) row[j] /= z;
  }
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "softmax_rows",
                 [aid, m, n](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const Tensor& g = t->node(self).grad;
                   const Tensor& y = t->node(self).value;
                   Tensor* ga = t->grad_buf(aid);
                   for (int64_t i = 0; i < m; ++i) {
                     const double* gi = g.data() + i * n;
                     const double* yi = y.data() + i * n;
                     double dot = 0.0;
                     for (int64_t j = 0; j < n; ++j) dot += gi[j] * yi[j];
                     double* gai = ga->data() + i * n;
                     for (int64_t j = 0; j < n; ++j) gai[j] += yi[j] * (gi[j] - dot);
                   }
                 });
}

// ---------------------------------------------------------------------------
// reductions

Var sum(Var a) {
  Prep p = prep1(a);
  const Tensor& av = p.tape->value(a);
  double s = 0.0;
  for (double x : av.raw()) s += x;
  const int aid = a.id;
  return make_op(p.tape, Tensor::from({1}, {s}), p.needs_grad, "sum",
                 [aid](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const double g = t->node(self).grad.raw()[0];
                   Tensor* ga = t->grad_buf(aid);
                   for (double& x : ga->raw()) x += g;
                 });
}

Var mean(Var a) {
  Prep p = prep1(a);
  const Tensor& av = p.tape->value(a);
  XC_SHAPE_CHECK(av.numel() > 0, "mean of empty tensor");
  double s = 0.0;
  for (double x : av.raw()) s += x;
  const double inv = 1.0 / static_cast<double>(av.numel());
  const int aid = a.id;
  return make_op(p.tape, Tensor::from({1}, {s * inv}), p.needs_grad, "mean",
                 [aid, inv](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const double g = t->node(self).grad.raw()[0] * inv;
                   Tensor* ga = t->grad_buf(aid);
                   for (double& x : ga->raw()) x += g;
                 });
}

Var sum_sq(Var a) {
  Prep p = prep1(a);
  const Tensor& av = p.tape->value(a);
  double s = 0.0;
  for (double x : av.raw()) s += x * x;
  const int aid = a.id;
  return make_op(p.tape, Tensor::from({1}, {s}), p.needs_grad, "sum_sq",
                 [aid](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const double g = t->node(self).grad.raw()[0];
                   const Tensor& x = t->node(aid).value;
                   Tensor* ga = t->grad_buf(aid);
                   for (int64_t i = 0; i < x.numel(); ++i)
                     ga->raw()[i] += 2.0 * g * x.raw()[i];
                 });
}

Var sum_cols(Var a) {
  Prep p = prep1(a);
  const Tensor& av = p.tape->value(a);
  XC_SHAPE_CHECK(av.ndim() == 2, "sum_cols: need 2-D");
  const int64_t m = av.rows(), n = av.cols();
  Tensor out({m, 1});
  for (int64_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (int64_t j = 0; j < n; ++j) s += av.at(i, j);
    out.at(i, 0) = s;
  }
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "sum_cols",
                 [aid, m, n](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const Tensor& g = t->node(self).grad;
                   Tensor* ga = t->grad_buf(aid);
                   for (int64_t i = 0; i < m; ++i)
                     for (int64_t j = 0; j < n; ++j) ga->at(i, j) += g.at(i, 0);
                 });
}

Var sum_rows(Var a) {
  Prep p = prep1(a);
  const Tensor& av = p.tape->value(a);
  XC_SHAPE_CHECK(av.ndim() == 2, "sum_rows: need 2-D");
  const int64_t m = av.rows(), n = av.cols();
  Tensor out({1, n});
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < n; ++j) out.at(0, j) += av.at(i, j);
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "sum_rows",
                 [aid, m, n](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const Tensor& g = t->node(self).grad;
                   Tensor* ga = t->grad_buf(aid);
                   for (int64_t i = 0; i < m; ++i)
                     for (int64_t j = 0; j < n; ++j) ga->at(i, j) += g.at(0, j);
                 });
}

// ---------------------------------------------------------------------------
// shape ops

Var concat_rows(const std::vector<Var>& parts) {
  XC_SHAPE_CHECK(!parts.empty(), "concat_rows: empty list");
  Prep p = prep1(parts[0]);
  bool needs = false;
  int64_t rows = 0;
  const int64_t n = p.tape->value(parts[0]).cols();
  for (Var v : parts) {
    check_same_tape(parts[0], v);
    const Tensor& t = p.tape->value(v);
    XC_SHAPE_CHECK(t.ndim() == 2 && t.cols() == n, "concat_rows: column mismatch");
    rows += t.rows();
    needs = needs || p.tape->wants_grad(v.id);
  }
  Tensor out({rows, n});
  int64_t r = 0;
  std::vector<int> ids;
  std::vector<int64_t> row_of;
  for (Var v : parts) {
    const Tensor& t = p.tape->value(v);
    for (int64_t i = 0; i < t.rows(); ++i)
      for (int64_t j = 0; j < n; ++j) out.at(r + i, j) = t.at(i, j);
    ids.push_back(v.id);
    row_of.push_back(r);
    r += t.rows();
  }
  return make_op(p.tape, std::move(out), needs, "concat_rows",
                 [ids, row_of, n](Tape* t, int self) {
                   const Tensor& g = t->node(self).grad;
                   for (size_t k = 0; k < ids.size(); ++k) {
                     if (!t->wants_grad(ids[k])) continue;
                     Tensor* ga = t->grad_buf(ids[k]);
                     const int64_t r0 = row_of[k], m = ga->rows();
                     for (int64_t i = 0; i < m; ++i)
                       for (int64_t j = 0; j < n; ++j) ga->at(i, j) += g.at(r0 + i, j);
                   }
                 });
}

Var concat_cols(const std::vector<Var>& parts) {
  XC_SHAPE_CHECK(!parts.empty(), "concat_cols: empty list");
  Prep p = prep1(parts[0]);
  bool needs = false;
  int64_t cols = 0;
  const int64_t m = p.tape->value(parts[0]).rows();
  for (Var v : parts) {
    check_same_tape(parts[0], v);
    const Tensor& t = p.tape->value(v);
    XC_SHAPE_CHECK(t.ndim() == 2 && t.rows() == m, "concat_cols: row mismatch");
    cols += t.cols();
    needs = needs || p.tape->wants_grad(v.id);
  }
  Tensor out({m, cols});
  int64_t c = 0;
  std::vector<int> ids;
  std::vector<int64_t> col_of;
  for (Var v : parts) {
    const Tensor& t = p.tape->value(v);
    for (int64_t i = 0; i < m; ++i)
      for (int64_t j = 0; j < t.cols(); ++j) out.at(i, c + j) = t.at(i, j);
    ids.push_back(v.id);
    col_of.push_back(c);
    c += t.cols();
  }
  return make_op(p.tape, std::move(out), needs, "concat_cols",
                 [ids, col_of, m](Tape* t, int self) {
                   const Tensor& g = t->node(self).grad;
                   for (size_t k = 0; k < ids.size(); ++k) {
                     if (!t->wants_grad(ids[k])) continue;
                     Tensor* ga = t->grad_buf(ids[k]);
                     const int64_t c0 = col_of[k], n = ga->cols();
                     for (int64_t i = 0; i < m; ++i)
                       for (int64_t j = 0; j < n; ++j) ga->at(i, j) += g.at(i, c0 + j);
                   }
                 });
}

Var concat_vec(const std::vector<Var>& parts) {
  XC_SHAPE_CHECK(!parts.empty(), "concat_vec: empty list");
  Prep p = prep1(parts[0]);
  bool needs = false;
  int64_t total = 0;
  for (Var v : parts) {
    check_same_tape(parts[0], v);
    const Tensor& t = p.tape->value(v);
    XC_SHAPE_CHECK(t.ndim() == 1, "concat_vec: need 1-D parts");
    total += t.numel();
    needs = needs || p.tape->wants_grad(v.id);
  }
  Tensor out({total});
  int64_t o = 0;
  std::vector<int> ids;
  std::vector<int64_t> off;
  for (Var v : parts) {
    const Tensor& t = p.tape->value(v);
    for (int64_t i = 0; i < t.numel(); ++i) out.at(o + i) = t.at(i);
    ids.push_back(v.id);
    off.push_back(o);
    o += t.numel();
  }
  return make_op(p.tape, std::move(out), needs, "concat_vec",
                 [ids, off](Tape* t, int self) {
                   const Tensor& g = t->node(self).grad;
                   for (size_t k = 0; k < ids.size(); ++k) {
                     if (!t->wants_grad(ids[k])) continue;
                     Tensor* ga = t->grad_buf(ids[k]);
                     for (int64_t i = 0; i < ga->numel(); ++i)
                       ga->raw()[i] += g.at(off[k] + i);
                   }
                 });
}

Var slice_rows(Var a, int64_t r0, int64_t r1) {
  Prep p = prep1(a);
  const Tensor& av = p.tape->value(a);
  XC_SHAPE_CHECK(av.ndim() == 2 && 0 <= r0 && r0 < r1 && r1 <= av.rows(),
                 "slice_rows: bad range [" << r0 << "," << r1 << ")");
  const int64_t n = av.cols();
  Tensor out({r1 - r0, n});
  for (int64_t i = r0; i < r1; ++i)
    for (int64_t j = 0; j < n; ++j) out.at(i - r0, j) = av.at(i, j);
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "slice_rows",
                 [aid, r0, r1, n](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const Tensor& g = t->node(self).grad;
                   Tensor* ga = t->grad_buf(aid);
                   for (int64_t i = r0; i < r1; ++i)
                     for (int64_t j = 0; j < n; ++j) ga->at(i, j) += g.at(i - r0, j);
                 });
}

Var slice_cols(Var a, int64_t c0, int64_t c1) {
  Prep p = prep1(a);
  const Tensor& av = p.tape->value(a);
  XC_SHAPE_CHECK(av.ndim() == 2 && 0 <= c0 && c0 < c1 && c1 <= av.cols(),
                 "slice_cols: bad range [" << c0 << "," << c1 << ")");
  const int64_t m = av.rows();
  Tensor out({m, c1 - c0});
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = c0; j < c1; ++j) out.at(i, j - c0) = av.at(i, j);
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "slice_cols",
                 [aid, c0, c1, m](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const Tensor& g = t->node(self).grad;
                   Tensor* ga = t->grad_buf(aid);
                   for (int64_t i = 0; i < m; ++i)
                     for (int64_t j = c0; j < c1; ++j) ga->at(i, j) += g.at(i, j - c0);
                 });
}

Var reshape(Var a, std::vector<int64_t> shape) {
  Prep p = prep1(a);
  const Tensor& av = p.tape->value(a);
  Tensor out = Tensor::from(shape, av.raw());
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "reshape",
                 [aid](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   axpy(t->grad_buf(aid), t->node(self).grad, 1.0);
                 });
}

// ---------------------------------------------------------------------------
// normalization and similarity

namespace {

// Shared row-wise normalize for 1-D ([1 x n] view) and 2-D tensors.
Var normalize_impl(Var a, bool rows2d, const char* opname) {
  Prep p = prep1(a);
  const Tensor& av = p.tape->value(a);
  if (rows2d) {
    XC_SHAPE_CHECK(av.ndim() == 2, opname << ": need 2-D");
  } else {
    XC_SHAPE_CHECK(av.ndim() == 1, opname << ": need 1-D");
  }
  const int64_t m = av.rows(), n = av.cols();
  Tensor out = av;
  std::vector<double> norms(m);
  for (int64_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (int64_t j = 0; j < n; ++j) s += av.raw()[i * n + j] * av.raw()[i * n + j];
    const double norm = std::sqrt(s);
    XC_CHECK(norm > kNormEps, opname << ": cannot normalize a zero vector (row " << i << ")");
    norms[i] = norm;
    for (int64_t j = 0; j < n; ++j) out.raw()[i * n + j] /= norm;
  }
  const int aid = a.id;
  return make_op(p.tape, std::move(out), p.needs_grad, opname,
                 [aid, m, n, norms](Tape* t, int self) {
                   if (!t->wants_grad(aid)) return;
                   const Tensor& g = t->node(self).grad;
                   const Tensor& y = t->node(self).value;
                   Tensor* ga = t->grad_buf(aid);
                   for (int64_t i = 0; i < m; ++i) {
                     const double* gi = g.data() + i * n;
                     const double* yi = y.data() + i * n;
                     double dot = 0.0;
                     for (int64_t j = 0; j < n; ++j) dot += gi[j] * yi[j];
                     double* gai = ga->data() + i * n;
                     for (int64_t j = 0; j < n; ++j)
                       gai[j] += (gi[j] - yi[j] * dot) / norms[i];
                   }
                 });
}

}  // namespace

Var l2_normalize(Var a) { return normalize_impl(a, false, "l2_normalize"); }
Var l2_normalize_rows(Var a) { return normalize_impl(a, true, "l2_normalize_rows"); }

Var cosine_similarity(Var a, Var b) {
  Prep p = prep2(a, b);
  const Tensor& av = p.tape->value(a);
  const Tensor& bv = p.tape->value(b);
  XC_SHAPE_CHECK(av.ndim() == 1 && bv.ndim() == 1 && av.numel() == bv.numel(),
                 "cosine_similarity: need equal-length 1-D vectors");
  const int64_t n = av.numel();
  double aa = 0.0, bb = 0.0, abdot = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    aa += av.at(i) * av.at(i);
    bb += bv.at(i) * bv.at(i);
    abdot += av.at(i) * bv.at(i);
  }
  const double na = std::sqrt(aa), nb = std::sqrt(bb);
  XC_CHECK(na > kNormEps && nb > kNormEps,
           "cosine_similarity: zero vector has no direction");
  const double c = abdot / (na * nb);
  const int aid = a.id, bid = b.id;
  return make_op(p.tape, Tensor::from({1}, {c}), p.needs_grad, "cosine_similarity",
                 [aid, bid, n, na, nb, c](Tape* t, int self) {
                   const double g = t->node(self).grad.raw()[0];
                   const Tensor& av2 = t->node(aid).value;
                   const Tensor& bv2 = t->node(bid).value;
                   if (t->wants_grad(aid)) {
                     Tensor* ga = t->grad_buf(aid);
                     for (int64_t i = 0; i < n; ++i)
                       ga->raw()[i] += g * (bv2.at(i) / (na * nb) - c * av2.at(i) / (na * na));
                   }
                   if (t->wants_grad(bid)) {
                     Tensor* gb = t->grad_buf(bid);
                     for (int64_t i = 0; i < n; ++i)
                       gb->raw()[i] += g * (av2.at(i) / (na * nb) - c * bv2.at(i) / (nb * nb));
                   }
                 });
}

Var mul_scalar(Var a, Var s) {
  Prep p = prep2(a, s);
  const Tensor& av = p.tape->value(a);
  const Tensor& sv = p.tape->value(s);
  XC_SHAPE_CHECK(sv.numel() == 1, "mul_scalar: scalar operand must have 1 element");
  const double sval = sv.raw()[0];
  Tensor out = av;
  for (double& x : out.raw()) x *= sval;
  const int aid = a.id, sid = s.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "mul_scalar",
                 [aid, sid, sval](Tape* t, int self) {
                   const Tensor& g = t->node(self).grad;
                   if (t->wants_grad(aid)) axpy(t->grad_buf(aid), g, sval);
                   if (t->wants_grad(sid)) {
                     const Tensor& av2 = t->node(aid).value;
                     double acc = 0.0;
                     for (int64_t i = 0; i < g.numel(); ++i)
                       acc += g.raw()[i] * av2.raw()[i];
                     t->grad_buf(sid)->raw()[0] += acc;
                   }
                 });
}

Var add_scalar(Var a, Var s) {
  Prep p = prep2(a, s);
  const Tensor& av = p.tape->value(a);
  const Tensor& sv = p.tape->value(s);
  XC_SHAPE_CHECK(sv.numel() == 1, "add_scalar: scalar operand must have 1 element");
  const double sval = sv.raw()[0];
  Tensor out = av;
  for (double& x : out.raw()) x += sval;
  const int aid = a.id, sid = s.id;
  return make_op(p.tape, std::move(out), p.needs_grad, "add_scalar",
                 [aid, sid](Tape* t, int self) {
                   const Tensor& g = t->node(self).grad;
                   if (t->wants_grad(aid)) axpy(t->grad_buf(aid), g, 1.0);
                   if (t->wants_grad(sid)) {
                     double acc = 0.0;
                     for (double x : g.raw()) acc += x;
                     t->grad_buf(sid)->raw()[0] += acc;
                   }
                 });
}

Var conv1d(Var x, Var w, Var b, int64_t k, int64_t stride, int64_t pad) {
  Prep p = prep2(x, w);
  check_same_tape(x, b);
  const Tensor& xv = p.tape->value(x);
  const Tensor& wv = p.tape->value(w);
  const Tensor& bv = p.tape->value(b);
  XC_SHAPE_CHECK(xv.ndim() == 2 && wv.ndim() == 2 && k >= 1 && stride >= 1 && pad >= 0,
                 "conv1d: bad arguments");
  const int64_t T = xv.rows(), cin = xv.cols(), cout = wv.cols();
  XC_SHAPE_CHECK(wv.rows() == k * cin, "conv1d: weight rows must be k*cin");
  XC_SHAPE_CHECK(bv.numel() == cout, "conv1d: bias length mismatch");
  XC_SHAPE_CHECK(T + 2 * pad >= k, "conv1d: input shorter than kernel");
  const int64_t tout = (T + 2 * pad - k) / stride + 1;
  const bool needs = p.needs_grad || p.tape->wants_grad(b.id);
  Tensor out({tout, cout});
  for (int64_t to = 0; to < tout; ++to) {
    double* orow = out.data() + to * cout;
    for (int64_t j = 0; j < cout; ++j) orow[j] = bv.at(j);
    for (int64_t dk = 0; dk < k; ++dk) {
      const int64_t ti = to * stride + dk - pad;
      if (ti < 0 || ti >= T) continue;
      const double* xrow = xv.data() + ti * cin;
      for (int64_t ci = 0; ci < cin; ++ci) {
        const double xval = xrow[ci];
        if (xval == 0.0) continue;
        const double* wrow = wv.data() + (dk * cin + ci) * cout;
        for (int64_t j = 0; j < cout; ++j) orow[j] += xval * wrow[j];
      }
    }
  }
  const int xid = x.id, wid = w.id, bid = b.id;
  return make_op(p.tape, std::move(out), needs, "conv1d",
                 [xid, wid, bid, k, stride, pad, T, cin, cout, tout](Tape* t, int self) {
                   const Tensor& g = t->node(self).grad;
                   const Tensor& xv2 = t->node(xid).value;
                   const Tensor& wv2 = t->node(wid).value;
                   const bool gx = t->wants_grad(xid);
                   const bool gw = t->wants_grad(wid);
                   const bool gb = t->wants_grad(bid);
                   Tensor* xg = gx ? t->grad_buf(xid) : nullptr;
                   Tensor* wg = gw ? t->grad_buf(wid) : nullptr;
                   Tensor* bg = gb ? t->grad_buf(bid) : nullptr;
                   for (int64_t to = 0; to < tout; ++to) {
                     const double* grow = g.data() + to * cout;
                     if (gb) {
                       for (int64_t j = 0; j < cout; ++j) bg->raw()[j] += grow[j];
                     }
                     for (int64_t dk = 0; dk < k; ++dk) {
                       const int64_t ti = to * stride + dk - pad;
                       if (ti < 0 || ti >= T) continue;
                       const double* xrow = xv2.data() + ti * cin;
                       for (int64_t ci = 0; ci < cin; ++ci) {
                         const double* wrow = wv2.data() + (dk * cin + ci) * cout;
                         if (gx) {
                           double s = 0.0;
                           for (int64_t j = 0; j < cout; ++j) s += grow[j] * wrow[j];
                           xg->data()[ti * cin + ci] += s;
                         }
                         if (gw) {
                           double* wgrow = wg->data() + (dk * cin + ci) * cout;
                           const double xval = xrow[ci];
                           for (int64_t j = 0; j < cout; ++j) wgrow[j] += xval * grow[j];
                         }
                       }
                     }
                   }
                 });
}

}  // namespace ad
}  // namespace xclone
