// tests/test_ad.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "ad/checkpoint.h"
#include "ad/optim.h"
#include "base/io.h"
#include "ad/params.h"
#include "ad/tape.h"
#include "base/error.h"
#include "base/rng.h"
#include "base/tensor.h"
#include "oracles.h"

using namespace xclone;
using ad::Tape;
using ad::Var;

TEST_CASE("softmax of a constant row is uniform") {
  Tape t;
  Var x = t.leaf(Tensor::vec({0.0, 0.0, 0.0}), false);
  Var y = ad::softmax_rows(x);
  for (int i = 0; i < 3; ++i) CHECK(t.value(y).at(i) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("l2_normalize on a 3-4-5 triangle") {
  Tape t;
  Var x = t.leaf(Tensor::vec({3.0, 4.0}), false);
  Var y = ad::l2_normalize(x);
  CHECK(t.value(y).at(0) == doctest::Approx(0.6));
  CHECK(t.value(y).at(1) == doctest::Approx(0.8));
}

TEST_CASE("cosine similarity of a vector with itself is 1") {
  Rng rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    Tape t;
    Tensor v = Tensor::randn({6}, &rng);
    Var a = t.leaf(v, false);
    Var b = t.leaf(v, false);
    Var c = ad::cosine_similarity(a, b);
    CHECK(t.value(c).at(0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gradient of sum of squares is 2x") {
  Tape t;
  Var x = t.leaf(Tensor::vec({1.0, 2.0, 3.0}), true);
  Var loss = ad::sum_sq(x);
  t.backward(loss);
  Tensor g = t.grad(x);
  CHECK(g.at(0) == doctest::Approx(2.0));
  CHECK(g.at(1) == doctest::Approx(4.0));
  CHECK(g.at(2) == doctest::Approx(6.0));
}

TEST_CASE("zero-vector normalize is rejected") {
  Tape t;
  Var x = t.leaf(Tensor::vec({0.0, 0.0}), false);
  CHECK_THROWS_AS(ad::l2_normalize(x), DataError);
}

TEST_CASE("shape mismatch is a dimension error") {
  Tape t;
  Var a = t.leaf(Tensor::vec({1.0, 2.0}), false);
  Var b = t.leaf(Tensor::vec({1.0, 2.0, 3.0}), false);
  CHECK_THROWS_AS(ad::add(a, b), ShapeError);
  Var m = t.leaf(Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6}), false);
  CHECK_THROWS_AS(ad::matmul(m, m), ShapeError);
}

TEST_CASE("backward from a non-scalar is rejected") {
  Tape t;
  Var x = t.leaf(Tensor::vec({1.0, 2.0}), true);
  Var y = ad::scale(x, 2.0);
  CHECK_THROWS_AS(t.backward(y), ShapeError);
}

TEST_CASE("repeated backward on one tape is rejected") {
  Tape t;
  Var x = t.leaf(Tensor::vec({1.0, 2.0}), true);
  Var loss = ad::sum_sq(x);
  t.backward(loss);
  CHECK_THROWS_AS(t.backward(loss), DataError);
}

TEST_CASE("NaN produced by an op raises a numerical error") {
  Tape t;
  Var x = t.leaf(Tensor::vec({-1.0}), false);
  CHECK_THROWS_AS(ad::log(x), NumericalError);
  Var big = t.leaf(Tensor::vec({1e308}), false);
  CHECK_THROWS_AS(ad::exp(big), NumericalError);  // overflow to inf is caught
}

TEST_CASE("softmax row gradient sums to zero per row") {
  Rng rng(11);
  Tape t;
  Var x = t.leaf(Tensor::randn({3, 5}, &rng), true);
  Var y = ad::softmax_rows(x);
  // Arbitrary non-uniform downstream weighting.
  Var w = t.leaf(Tensor::randn({3, 5}, &rng), false);
  Var loss = ad::sum(ad::mul(y, w));
  t.backward(loss);
  Tensor g = t.grad(x);
  for (int64_t i = 0; i < 3; ++i) {
    double row_sum = 0.0;
    for (int64_t j = 0; j < 5; ++j) row_sum += g.at(i, j);
    CHECK(std::fabs(row_sum) < 1e-12);
  }
}

// ---------------------------------------------------------------------------
// finite differences over every primitive

namespace {

// Wraps a Var-producing op into a scalar loss: weighted sum with fixed
// pseudo-random weights (so every output coordinate influences the loss).
oracle::GraphFn weighted(const std::function<Var(Tape*, const std::vector<Var>&)>& op) {
  return [op](Tape* t, const std::vector<Var>& in) -> Var {
    Var y = op(t, in);
    const Tensor& yv = t->value(y);
    Tensor w(yv.shape());
    Rng rng(99);
    for (double& x : w.raw()) x = rng.uniform(0.5, 1.5);
    Var wc = t->leaf(w, false);
    return ad::sum(ad::mul(y, wc));
  };
}

void check_fd(const char* name, const oracle::GraphFn& fn,
              const std::vector<Tensor>& inputs, double tol = 1e-4) {
  INFO("primitive: " << name);
  oracle::FdReport rep = oracle::fd_check(fn, inputs);
  CHECK(rep.max_rel_err < tol);
}

}  // namespace

TEST_CASE("analytic gradients agree with central finite differences") {
  Rng rng(42);
  const Tensor a23 = Tensor::randn({2, 3}, &rng);
  const Tensor b23 = Tensor::randn({2, 3}, &rng);
  const Tensor m34 = Tensor::randn({3, 4}, &rng);
  const Tensor row3 = Tensor::randn({3}, &rng);
  const Tensor v5 = Tensor::randn({5}, &rng);
  const Tensor w5 = Tensor::randn({5}, &rng);
  const Tensor s1 = Tensor::vec({0.7});

  check_fd("add", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::add(in[0], in[1]);
           }),
           {a23, b23});
  check_fd("sub", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::sub(in[0], in[1]);
           }),
           {a23, b23});
  check_fd("mul", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::mul(in[0], in[1]);
           }),
           {a23, b23});
  check_fd("add_rowvec", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::add_rowvec(in[0], in[1]);
           }),
           {a23, row3});
  check_fd("scale", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::scale(in[0], -1.7);
           }),
           {a23});
  check_fd("add_const", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::add_const(in[0], 0.3);
           }),
           {a23});
  check_fd("matmul", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::matmul(in[0], in[1]);
           }),
           {a23, m34});
  check_fd("transpose", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::transpose(in[0]);
           }),
           {a23});
  check_fd("tanh", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::tanh(in[0]);
           }),
           {a23});
  check_fd("sigmoid", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::sigmoid(in[0]);
           }),
           {a23});
  check_fd("relu", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::relu(in[0]);
           }),
           {a23});
  check_fd("exp", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::exp(in[0]);
           }),
           {a23});
  {
    Tensor pos = a23;
    for (double& x : pos.raw()) x = std::fabs(x) + 0.5;
    check_fd("log", weighted([](Tape*, const std::vector<Var>& in) {
               return ad::log(in[0]);
             }),
             {pos});
  }
  check_fd("softmax_rows", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::softmax_rows(in[0]);
           }),
           {a23});
  check_fd("sum", [](Tape*, const std::vector<Var>& in) { return ad::sum(in[0]); },
           {a23});
  check_fd("mean", [](Tape*, const std::vector<Var>& in) { return ad::mean(in[0]); },
           {a23});
  check_fd("sum_sq",
           [](Tape*, const std::vector<Var>& in) { return ad::sum_sq(in[0]); }, {a23});
  check_fd("sum_cols", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::sum_cols(in[0]);
           }),
           {a23});
  check_fd("sum_rows", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::sum_rows(in[0]);
           }),
           {a23});
  check_fd("concat_rows", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::concat_rows({in[0], in[1]});
           }),
           {a23, b23});
  check_fd("concat_cols", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::concat_cols({in[0], in[1]});
           }),
           {a23, b23});
  check_fd("concat_vec", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::concat_vec({in[0], in[1]});
           }),
           {v5, w5});
  check_fd("slice_rows", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::slice_rows(in[0], 1, 3);
           }),
           {m34});
  check_fd("slice_cols", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::slice_cols(in[0], 1, 3);
           }),
           {m34});
  check_fd("reshape", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::reshape(in[0], {3, 2});
           }),
           {a23});
  check_fd("l2_normalize", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::l2_normalize(in[0]);
           }),
           {v5});
  check_fd("l2_normalize_rows", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::l2_normalize_rows(in[0]);
           }),
           {a23});
  check_fd("cosine_similarity",
           [](Tape*, const std::vector<Var>& in) {
             return ad::cosine_similarity(in[0], in[1]);
           },
           {v5, w5});
  check_fd("mul_scalar", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::mul_scalar(in[0], in[1]);
           }),
           {a23, s1});
  check_fd("add_scalar", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::add_scalar(in[0], in[1]);
           }),
           {a23, s1});
  check_fd("conv1d", weighted([](Tape*, const std::vector<Var>& in) {
             return ad::conv1d(in[0], in[1], in[2], 3, 2, 1);
           }),
           {Tensor::randn({7, 2}, &rng), Tensor::randn({6, 4}, &rng),
            Tensor::randn({4}, &rng)});
}

TEST_CASE("composite graph gradient matches finite differences") {
  Rng rng(5);
  const Tensor x = Tensor::randn({4, 3}, &rng);
  const Tensor w = Tensor::randn({3, 3}, &rng, 0.5);
  const Tensor b = Tensor::randn({3}, &rng, 0.1);
  oracle::GraphFn fn = [](Tape*, const std::vector<Var>& in) -> Var {
    Var h = ad::tanh(ad::add_rowvec(ad::matmul(in[0], in[1]), in[2]));
    Var p = ad::softmax_rows(h);
    return ad::mean(ad::sum_sq(ad::mul(p, h)));
  };
  oracle::FdReport rep = oracle::fd_check(fn, {x, w, b});
  CHECK(rep.max_rel_err < 1e-3);
}

TEST_CASE("gradients are deterministic across repeated runs") {
  auto run = [] {
    Rng rng(123);
    Tape t;
    Var x = t.leaf(Tensor::randn({4, 4}, &rng), true);
    Var y = t.leaf(Tensor::randn({4, 4}, &rng), true);
    Var loss = ad::sum_sq(ad::tanh(ad::matmul(x, y)));
    t.backward(loss);
    return std::make_pair(t.value(loss).at(0), t.grad(x));
  };
  auto [l1, g1] = run();
  auto [l2, g2] = run();
  CHECK(l1 == l2);  // bit-identical
  for (int64_t i = 0; i < g1.numel(); ++i) CHECK(g1.raw()[i] == g2.raw()[i]);
}

// ---------------------------------------------------------------------------
// optimizer

TEST_CASE("zero gradient leaves parameters unchanged") {
  ad::ParamStore params;
  params.create("x", Tensor::vec({1.0, -2.0, 3.0}));
  ad::AdamState state;
  ad::GradMap grads;
  grads.emplace("x", Tensor({3}));
  sgd_adaptive_step(&params, grads, 1e-2, &state);
  CHECK(params.get("x").at(0) == 1.0);
  CHECK(params.get("x").at(1) == -2.0);
  CHECK(params.get("x").at(2) == 3.0);
}

TEST_CASE("constant positive gradient decreases a scalar monotonically") {
  ad::ParamStore params;
  params.create("x", Tensor::vec({5.0}));
  ad::AdamState state;
  double prev = 5.0;
  for (int i = 0; i < 50; ++i) {
    ad::GradMap grads;
    grads.emplace("x", Tensor::vec({2.5}));
    sgd_adaptive_step(&params, grads, 1e-2, &state);
    CHECK(params.get("x").at(0) < prev);
    prev = params.get("x").at(0);
  }
}

TEST_CASE("quadratic bowl converges and matches the scalar oracle") {
  ad::ParamStore params;
  params.create("x", Tensor::vec({1.0}));
  ad::AdamState state;
  oracle::ScalarAdam ref;
  double xref = 1.0;
  for (int i = 0; i < 500; ++i) {
    const double x = params.get("x").at(0);
    ad::GradMap grads;
    grads.emplace("x", Tensor::vec({2.0 * x}));
    sgd_adaptive_step(&params, grads, 1e-2, &state);
    xref = ref.step(xref, 2.0 * xref, 1e-2);
    CHECK(params.get("x").at(0) == doctest::Approx(xref).epsilon(1e-12));
  }
  CHECK(std::fabs(params.get("x").at(0)) < 1e-2);
}

TEST_CASE("NaN gradient raises a training-divergence error") {
  ad::ParamStore params;
  params.create("x", Tensor::vec({1.0}));
  ad::AdamState state;
  ad::GradMap grads;
  Tensor g({1});
  g.raw()[0] = std::nan("");
  grads.emplace("x", std::move(g));
  CHECK_THROWS_AS(sgd_adaptive_step(&params, grads, 1e-2, &state), NumericalError);
}

TEST_CASE("parameters absent from the gradient map stay untouched") {
  ad::ParamStore params;
  params.create("enc.w", Tensor::vec({1.0}));
  params.create("dec.w", Tensor::vec({1.0}));
  ad::AdamState state;
  ad::GradMap grads;
  grads.emplace("dec.w", Tensor::vec({1.0}));
  sgd_adaptive_step(&params, grads, 1e-2, &state);
  CHECK(params.get("enc.w").at(0) == 1.0);
  CHECK(params.get("dec.w").at(0) < 1.0);
}

// ---------------------------------------------------------------------------
// end-to-end training sanity on the tape

TEST_CASE("training a tiny network reduces its loss") {
  Rng rng(2024);
  ad::ParamStore params;
  params.create("w1", Tensor::randn({3, 8}, &rng, 0.5));
  params.create("b1", Tensor::randn({8}, &rng, 0.1));
  params.create("w2", Tensor::randn({8, 1}, &rng, 0.5));
  const Tensor x = Tensor::randn({16, 3}, &rng);
  Tensor target({16, 1});
  for (int64_t i = 0; i < 16; ++i)
    target.at(i, 0) = std::sin(x.at(i, 0)) + 0.5 * x.at(i, 1);

  ad::AdamState state;
  double first = 0.0, last = 0.0;
  for (int it = 0; it < 200; ++it) {
    Tape t;
    ad::VarMap vars = params.leaves(&t, true);
    Var xc = t.constant(x);
    Var yc = t.constant(target);
    Var h = ad::tanh(ad::add_rowvec(ad::matmul(xc, vars.at("w1")), vars.at("b1")));
    Var pred = ad::matmul(h, vars.at("w2"));
    Var loss = ad::mean(ad::mul(ad::sub(pred, yc), ad::sub(pred, yc)));
    const double lv = t.value(loss).at(0);
    if (it == 0) first = lv;
    last = lv;
    t.backward(loss);
    ad::GradMap grads = ad::ParamStore::collect_grads(t, vars);
    sgd_adaptive_step(&params, grads, 1e-2, &state);
  }
  CHECK(last < 0.2 * first);
}

// ---------------------------------------------------------------------------
// checkpoint round-trip

TEST_CASE("checkpoint round-trips tensors and metadata bit-exactly") {
  Rng rng(31);
  ad::ParamStore params;
  params.create("dec.gru.w", Tensor::randn({5, 7}, &rng));
  params.create("enc.embed", Tensor::randn({13, 4}, &rng));
  std::map<std::string, std::string> meta{{"kind", "synthesizer"}, {"seed", "31"}};
  const std::string path = "ckpt_roundtrip_test.bin";
  save_checkpoint(path, params, meta);
  ad::Checkpoint loaded = ad::load_checkpoint(path);
  CHECK(loaded.metadata.at("kind") == "synthesizer");
  CHECK(loaded.metadata.at("seed") == "31");
  REQUIRE(loaded.params.size() == 2);
  for (const auto& [name, t] : params.items()) {
    const Tensor& u = loaded.params.get(name);
    REQUIRE(u.same_shape(t));
    for (int64_t i = 0; i < t.numel(); ++i) CHECK(u.raw()[i] == t.raw()[i]);
  }
  std::remove(path.c_str());
}

TEST_CASE("corrupt checkpoint magic is rejected") {
  const std::string path = "ckpt_badmagic_test.bin";
  write_file_text(path, "not a checkpoint at all");
  CHECK_THROWS_AS(ad::load_checkpoint(path), DataError);
  std::remove(path.c_str());
}
