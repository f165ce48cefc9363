// src/nn/nn.h

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

#ifndef XCLONE_NN_NN_H_
#define XCLONE_NN_NN_H_

#include <string>
#include <vector>

#include "ad/params.h"
#include "ad/tape.h"
#include "base/rng.h"

namespace xclone {
namespace nn {

// Parameter registration.  Every helper uses 1/sqrt(fan_in) Gaussian init
// for weights and zero biases, and names parameters "<prefix>.w" style so
// partial fine-tuning can select by prefix.

// "<prefix>.w" [in,out], "<prefix>.b" [1,out].
void add_linear(ad::ParamStore* store, const std::string& prefix, int64_t in,
                int64_t out, Rng* rng);

// Gated recurrent cell, fused gate weights (reset | update | candidate):
// "<prefix>.wi" [in,3h], "<prefix>.wh" [h,3h], "<prefix>.bi"/"<prefix>.bh"
// [1,3h].
void add_gru(ad::ParamStore* store, const std::string& prefix, int64_t in,
             int64_t hidden, Rng* rng);

// "<prefix>.w" [k*cin, cout], "<prefix>.b" [cout] for ad::conv1d.
void add_conv1d(ad::ParamStore* store, const std::string& prefix, int64_t k,
                int64_t cin, int64_t cout, Rng* rng);

// Graph builders over registered leaves.

// x [B,in] -> x w + b [B,out].
ad::Var linear(const ad::VarMap& vars, const std::string& prefix, ad::Var x);

// One recurrence step.  x [B,in], h [B,hidden] -> new h [B,hidden]:
//   r = sigmoid(x Wir + h Whr + b), z = sigmoid(x Wiz + h Whz + b),
//   n = tanh(x Win + bin + r * (h Whn + bhn)), h' = (1-z)*n + z*h.
ad::Var gru_cell(const ad::VarMap& vars, const std::string& prefix, ad::Var x,
                 ad::Var h);

// Unrolls gru_cell over the rows of x_seq [T,in] starting from a zero
// state; returns all hidden states stacked [T,hidden].
ad::Var gru_sequence(ad::Tape* tape, const ad::VarMap& vars,
                     const std::string& prefix, ad::Var x_seq, int64_t hidden);

// Batched unroll: xs[t] is [B,in]; returns hidden states per step, each
// [B,hidden], starting from a zero state.
std::vector<ad::Var> gru_sequence_batch(ad::Tape* tape, const ad::VarMap& vars,
                                        const std::string& prefix,
                                        const std::vector<ad::Var>& xs,
                                        int64_t batch, int64_t hidden);

}  // namespace nn
}  // namespace xclone

#endif  // XCLONE_NN_NN_H_
