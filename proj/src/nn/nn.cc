// src/nn/nn.cc

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

#include "nn/nn.h"

#include <cmath>

#include "base/error.h"

namespace xclone {
namespace nn {

namespace {

Tensor scaled_normal(std::vector<int64_t> shape, int64_t fan_in, Rng* rng) {
  return Tensor::randn(std::move(shape), rng, 1.0 / std::sqrt(static_cast<double>(fan_in)));
}

}  // namespace

void add_linear(ad::ParamStore* store, const std::string& prefix, int64_t in,
                int64_t out, Rng* rng) {
  XC_CHECK(in >= 1 && out >= 1, "bad linear dims " << in << "x" << out);
  store->create(prefix + ".w", scaled_normal({in, out}, in, rng));
  store->create(prefix + ".b", Tensor({1, out}));
}

void add_gru(ad::ParamStore* store, const std::string& prefix, int64_t in,
             int64_t hidden, Rng* rng) {
  XC_CHECK(in >= 1 && hidden >= 1, "bad recurrent dims " << in << "x" << hidden);
  store->create(prefix + ".wi", scaled_normal({in, 3 * hidden}, in, rng));
  store->create(prefix + ".wh", scaled_normal({hidden, 3 * hidden}, hidden, rng));
  store->create(prefix + ".bi", Tensor({1, 3 * hidden}));
  store->create(prefix + ".bh", Tensor({1, 3 * hidden}));
}

void add_conv1d(ad::ParamStore* store, const std::string& prefix, int64_t k,
                int64_t cin, int64_t cout, Rng* rng) {
  XC_CHECK(k >= 1 && cin >= 1 && cout >= 1, "bad convolution dims");
  store->create(prefix + ".w", scaled_normal({k * cin, cout}, k * cin, rng));
  store->create(prefix + ".b", Tensor({cout}));
}

ad::Var linear(const ad::VarMap& vars, const std::string& prefix, ad::Var x) {
  return ad::add_rowvec(ad::matmul(x, vars.at(prefix + ".w")),
                        vars.at(prefix + ".b"));
}

ad::Var gru_cell(const ad::VarMap& vars, const std::string& prefix, ad::Var x,
                 ad::Var h) {
  const ad::Var gx = ad::add_rowvec(ad::matmul(x, vars.at(prefix + ".wi")),
                                    vars.at(prefix + ".bi"));
  const ad::Var gh = ad::add_rowvec(ad::matmul(h, vars.at(prefix + ".wh")),
                                    vars.at(prefix + ".bh"));
  const int64_t hd = gx.tape->value(gx).cols() / 3;
  const ad::Var r = ad::sigmoid(ad::add(ad::slice_cols(gx, 0, hd),
                                        ad::slice_cols(gh, 0, hd)));
  const ad::Var z = ad::sigmoid(ad::add(ad::slice_cols(gx, hd, 2 * hd),
                                        ad::slice_cols(gh, hd, 2 * hd)));
  const ad::Var n = ad::tanh(ad::add(ad::slice_cols(gx, 2 * hd, 3 * hd),
                                     ad::mul(r, ad::slice_cols(gh, 2 * hd, 3 * hd))));
  // (1-z)*n + z*h without materializing a ones tensor.
  return ad::add(ad::sub(n, ad::mul(z, n)), ad::mul(z, h));
}

ad::Var gru_sequence(ad::Tape* tape, const ad::VarMap& vars,
                     const std::string& prefix, ad::Var x_seq, int64_t hidden) {
  const int64_t T = tape->value(x_seq).rows();
  XC_CHECK(T >= 1, "empty sequence");
  ad::Var h = tape->constant(Tensor({1, hidden}));
  std::vector<ad::Var> states;
  states.reserve(T);
  for (int64_t t = 0; t < T; ++t) {
    h = gru_cell(vars, prefix, ad::slice_rows(x_seq, t, t + 1), h);
    states.push_back(h);
  }
  return ad::concat_rows(states);
}

std::vector<ad::Var> gru_sequence_batch(ad::Tape* tape, const ad::VarMap& vars,
                                        const std::string& prefix,
                                        const std::vector<ad::Var>& xs,
                                        int64_t batch, int64_t hidden) {
  XC_CHECK(!xs.empty(), "empty sequence");
  ad::Var h = tape->constant(Tensor({batch, hidden}));
  std::vector<ad::Var> states;
  states.reserve(xs.size());
  for (const ad::Var& x : xs) {
    h = gru_cell(vars, prefix, x, h);
    states.push_back(h);
  }
  return states;
}

}  // namespace nn
}  // namespace xclone
