// src/dsp/stft.h

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

#ifndef XCLONE_DSP_STFT_H_
#define XCLONE_DSP_STFT_H_

#include <complex>
#include <vector>

#include "base/tensor.h"
#include "dsp/wav.h"

namespace xclone {
namespace dsp {

struct FrameConfig {
  int64_t window_length = 1024;
  int64_t hop_length = 256;
  int64_t fft_size = 1024;
  void validate() const;
  // 1 + floor((len - window) / hop); requires len >= window.
  int64_t num_frames(int64_t num_samples) const;
  int64_t num_bins() const { return fft_size / 2 + 1; }
};

// Periodic Hann window of length n.
std::vector<double> hann_window(int64_t n);

// Full-spectrum complex STFT: one fft_size-point spectrum per frame.
std::vector<std::vector<std::complex<double>>> stft_complex(
    const std::vector<double>& samples, const FrameConfig& cfg);

// One-sided magnitude, T x (fft_size/2 + 1).
Tensor stft_magnitude(const Waveform& wave, const FrameConfig& cfg);

// Weighted overlap-add inverse of stft_complex output.
std::vector<double> istft(const std::vector<std::vector<std::complex<double>>>& frames,
                          const FrameConfig& cfg);

}  // namespace dsp
}  // namespace xclone

#endif  // XCLONE_DSP_STFT_H_
