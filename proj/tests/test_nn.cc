// tests/test_nn.cc

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
#include <vector>

#include "ad/params.h"
#include "ad/tape.h"
#include "base/error.h"
#include "base/rng.h"
#include "nn/nn.h"
#include "oracles.h"

using namespace xclone;

namespace {

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Plain-loop recurrence oracle mirroring the fused-gate layout
// (reset | update | candidate) one batch row at a time.
std::vector<double> gru_oracle_row(const std::vector<double>& x,
                                   const std::vector<double>& h, const Tensor& wi,
                                   const Tensor& wh, const Tensor& bi,
                                   const Tensor& bh) {
  const int64_t in = wi.rows(), hd = wh.rows();
  std::vector<double> gx(3 * hd), gh(3 * hd);
  for (int64_t j = 0; j < 3 * hd; ++j) {
    gx[j] = bi.at(0, j);
    for (int64_t i = 0; i < in; ++i) gx[j] += x[i] * wi.at(i, j);
    gh[j] = bh.at(0, j);
    for (int64_t i = 0; i < hd; ++i) gh[j] += h[i] * wh.at(i, j);
  }
  std::vector<double> out(hd);
  for (int64_t j = 0; j < hd; ++j) {
    const double r = sig(gx[j] + gh[j]);
    const double z = sig(gx[hd + j] + gh[hd + j]);
    const double n = std::tanh(gx[2 * hd + j] + r * gh[2 * hd + j]);
    out[j] = (1.0 - z) * n + z * h[j];
  }
  return out;
}

}  // namespace

TEST_CASE("gru_cell matches the plain-loop oracle") {
  Rng rng(21);
  const int64_t in = 5, hd = 4, batch = 3;
  ad::ParamStore store;
  nn::add_gru(&store, "g", in, hd, &rng);
  Tensor x = Tensor::randn({batch, in}, &rng, 1.0);
  Tensor h = Tensor::randn({batch, hd}, &rng, 1.0);

  ad::Tape tape;
  ad::VarMap vars = store.leaves(&tape, false);
  ad::Var out = nn::gru_cell(vars, "g", tape.constant(x), tape.constant(h));
  const Tensor& got = tape.value(out);

  for (int64_t b = 0; b < batch; ++b) {
    std::vector<double> xr(in), hr(hd);
    for (int64_t i = 0; i < in; ++i) xr[i] = x.at(b, i);
    for (int64_t i = 0; i < hd; ++i) hr[i] = h.at(b, i);
    const std::vector<double> want = gru_oracle_row(
        xr, hr, store.get("g.wi"), store.get("g.wh"), store.get("g.bi"),
        store.get("g.bh"));
    for (int64_t j = 0; j < hd; ++j)
      CHECK(got.at(b, j) == doctest::Approx(want[j]).epsilon(1e-12));
  }
}

TEST_CASE("gru_cell gradients agree with finite differences") {
  Rng rng(22);
  const int64_t in = 3, hd = 3;
  // Leaves: x, h, wi, wh, bi, bh.
  std::vector<Tensor> inputs = {
      Tensor::randn({2, in}, &rng, 1.0),      Tensor::randn({2, hd}, &rng, 1.0),
      Tensor::randn({in, 3 * hd}, &rng, 0.5), Tensor::randn({hd, 3 * hd}, &rng, 0.5),
      Tensor::randn({1, 3 * hd}, &rng, 0.5),  Tensor::randn({1, 3 * hd}, &rng, 0.5)};
  oracle::GraphFn fn = [&](ad::Tape* tape, const std::vector<ad::Var>& leaves) {
    ad::VarMap vars;
    vars["g.wi"] = leaves[2];
    vars["g.wh"] = leaves[3];
    vars["g.bi"] = leaves[4];
    vars["g.bh"] = leaves[5];
    return ad::sum_sq(nn::gru_cell(vars, "g", leaves[0], leaves[1]));
  };
  const oracle::FdReport rep = oracle::fd_check(fn, inputs);
  CHECK(rep.max_rel_err < 1e-3);
}

TEST_CASE("batch rows evolve independently") {
  Rng rng(23);
  const int64_t in = 4, hd = 5;
  ad::ParamStore store;
  nn::add_gru(&store, "g", in, hd, &rng);
  Tensor x = Tensor::randn({2, in}, &rng, 1.0);
  Tensor h = Tensor::randn({2, hd}, &rng, 1.0);

  auto run = [&](const Tensor& xb, const Tensor& hb) {
    ad::Tape tape;
    ad::VarMap vars = store.leaves(&tape, false);
    return tape.value(nn::gru_cell(vars, "g", tape.constant(xb), tape.constant(hb)));
  };
  const Tensor both = run(x, h);
  for (int64_t b = 0; b < 2; ++b) {
    Tensor xr({1, in}), hr({1, hd});
    for (int64_t i = 0; i < in; ++i) xr.at(0, i) = x.at(b, i);
    for (int64_t i = 0; i < hd; ++i) hr.at(0, i) = h.at(b, i);
    const Tensor solo = run(xr, hr);
    for (int64_t j = 0; j < hd; ++j) CHECK(both.at(b, j) == solo.at(0, j));
  }
}

TEST_CASE("gru_sequence equals manual unrolling and batch variant") {
  Rng rng(24);
  const int64_t in = 3, hd = 4, T = 6;
  ad::ParamStore store;
  nn::add_gru(&store, "g", in, hd, &rng);
  Tensor x = Tensor::randn({T, in}, &rng, 1.0);

  ad::Tape tape;
  ad::VarMap vars = store.leaves(&tape, false);
  const Tensor seq =
      tape.value(nn::gru_sequence(&tape, vars, "g", tape.constant(x), hd));
  REQUIRE(seq.rows() == T);

  // Manual unroll.
  ad::Var h = tape.constant(Tensor({1, hd}));
  for (int64_t t = 0; t < T; ++t) {
    Tensor xt({1, in});
    for (int64_t i = 0; i < in; ++i) xt.at(0, i) = x.at(t, i);
    h = nn::gru_cell(vars, "g", tape.constant(xt), h);
    for (int64_t j = 0; j < hd; ++j) CHECK(seq.at(t, j) == tape.value(h).at(0, j));
  }

  // Batch-of-one unroll agrees too.
  std::vector<ad::Var> xs;
  for (int64_t t = 0; t < T; ++t) {
    Tensor xt({1, in});
    for (int64_t i = 0; i < in; ++i) xt.at(0, i) = x.at(t, i);
    xs.push_back(tape.constant(xt));
  }
  const std::vector<ad::Var> states =
      nn::gru_sequence_batch(&tape, vars, "g", xs, 1, hd);
  REQUIRE(states.size() == static_cast<size_t>(T));
  for (int64_t t = 0; t < T; ++t)
    for (int64_t j = 0; j < hd; ++j)
      CHECK(tape.value(states[t]).at(0, j) == seq.at(t, j));
}

TEST_CASE("linear layer matches hand computation and trains") {
  Rng rng(25);
  ad::ParamStore store;
  nn::add_linear(&store, "fc", 3, 2, &rng);
  Tensor x = Tensor::from({1, 3}, {1.0, -2.0, 0.5});
  ad::Tape tape;
  ad::VarMap vars = store.leaves(&tape, false);
  const Tensor y = tape.value(nn::linear(vars, "fc", tape.constant(x)));
  const Tensor& w = store.get("fc.w");
  const Tensor& b = store.get("fc.b");
  for (int64_t j = 0; j < 2; ++j) {
    double want = b.at(0, j);
    for (int64_t i = 0; i < 3; ++i) want += x.at(0, i) * w.at(i, j);
    CHECK(y.at(0, j) == doctest::Approx(want).epsilon(1e-15));
  }
  CHECK(store.get("fc.b").l2_norm() == 0.0);  // zero bias init
}

TEST_CASE("sequence gradients flow through every step") {
  Rng rng(26);
  const int64_t in = 2, hd = 3, T = 4;
  std::vector<Tensor> inputs = {
      Tensor::randn({T, in}, &rng, 1.0),      Tensor::randn({in, 3 * hd}, &rng, 0.5),
      Tensor::randn({hd, 3 * hd}, &rng, 0.5), Tensor::randn({1, 3 * hd}, &rng, 0.5),
      Tensor::randn({1, 3 * hd}, &rng, 0.5)};
  oracle::GraphFn fn = [&](ad::Tape* tape, const std::vector<ad::Var>& leaves) {
    ad::VarMap vars;
    vars["g.wi"] = leaves[1];
    vars["g.wh"] = leaves[2];
    vars["g.bi"] = leaves[3];
    vars["g.bh"] = leaves[4];
    return ad::sum_sq(nn::gru_sequence(tape, vars, "g", leaves[0], hd));
  };
  const oracle::FdReport rep = oracle::fd_check(fn, inputs);
  CHECK(rep.max_rel_err < 1e-3);
}
