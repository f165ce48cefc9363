// src/ad/optim.h

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

#ifndef XCLONE_AD_OPTIM_H_
#define XCLONE_AD_OPTIM_H_

#include <cstdint>
#include <map>
#include <string>

#include "ad/params.h"
#include "base/tensor.h"

namespace xclone {
namespace ad {

// First-order adaptive-moment optimizer state.  One state object per
// training run; moments are keyed by parameter name and created on first
// update of that parameter.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::map<std::string, Tensor> m;   // first moment
  std::map<std::string, Tensor> v;   // second moment
  std::map<std::string, int64_t> t;  // per-parameter update count (bias correction)
};

// In-place adaptive-moment update with bias correction.  Parameters absent
// from `grads` are left untouched (partial fine-tuning relies on this).
// A non-finite gradient is treated as training divergence.
void sgd_adaptive_step(ParamStore* params, const GradMap& grads, double lr,
                       AdamState* state);

}  // namespace ad
}  // namespace xclone

#endif  // XCLONE_AD_OPTIM_H_
