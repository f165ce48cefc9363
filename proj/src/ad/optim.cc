// src/ad/optim.cc

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

#include "ad/optim.h"

#include <cmath>

#include "base/error.h"

namespace xclone {
namespace ad {

void sgd_adaptive_step(ParamStore* params, const GradMap& grads, double lr,
                       AdamState* state) {
  XC_CHECK(lr > 0.0, "learning rate must be positive, got " << lr);
  for (const auto& [name, grad] : grads) {
    Tensor& p = params->get(name);
    XC_SHAPE_CHECK(p.same_shape(grad), "gradient shape mismatch for '" << name << "'");
    XC_NUM_CHECK(grad.all_finite(),
                 "training diverged: non-finite gradient for '" << name << "'");
    Tensor& m = state->m.try_emplace(name, Tensor(p.shape())).first->second;
    Tensor& v = state->v.try_emplace(name, Tensor(p.shape())).first->second;
    const int64_t t = ++state->t[name];
    const double b1 = state->beta1, b2 = state->beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(t));
    double* pd = p.data();
    double* md = m.data();
    double* vd = v.data();
    const double* gd = grad.data();
    for (int64_t i = 0; i < p.numel(); ++i) {
      md[i] = b1 * md[i] + (1.0 - b1) * gd[i];
      vd[i] = b2 * vd[i] + (1.0 - b2) * gd[i] * gd[i];
      const double mhat = md[i] / bc1;
      const double vhat = vd[i] / bc2;
      pd[i] -= lr * mhat / (std::sqrt(vhat) + state->eps);
    }
    XC_NUM_CHECK(p.all_finite(),
                 "training diverged: non-finite parameter '" << name << "' after update");
  }
}

}  // namespace ad
}  // namespace xclone
