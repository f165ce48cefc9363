// src/dsp/griffin_lim.h

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

#ifndef XCLONE_DSP_GRIFFIN_LIM_H_
#define XCLONE_DSP_GRIFFIN_LIM_H_

#include <vector>

#include "base/tensor.h"
#include "dsp/mel.h"
#include "dsp/stft.h"
#include "dsp/wav.h"

namespace xclone {
namespace dsp {

struct GriffinLimResult {
  Waveform wave;
  // Frobenius distance between the re-analyzed magnitude and the target,
  // one entry per iteration.  Non-increasing by construction.
  std::vector<double> distance_trace;
};

// Phase reconstruction from a one-sided magnitude matrix [T x fft/2+1].
// Zero-phase init, then n_iters magnitude-replacement rounds.
GriffinLimResult griffin_lim(const Tensor& magnitude, const FrameConfig& cfg,
                             int sample_rate_hz, int n_iters);

// Least-squares filterbank inversion: magnitude ~ FB^T (FB FB^T)^{-1} mel,
// clamped at zero (the paper's vocoder is out of scope; this is enough for
// the pitch-verification loop).
Tensor mel_to_magnitude(const MelSpectrogram& mel);

GriffinLimResult griffin_lim_mel(const MelSpectrogram& mel, int n_iters);

// Solves A x = b for square A by Gaussian elimination with partial
// pivoting; B may carry multiple right-hand sides as columns.
Tensor solve_linear(const Tensor& a, const Tensor& b);

}  // namespace dsp
}  // namespace xclone

#endif  // XCLONE_DSP_GRIFFIN_LIM_H_
