// src/dsp/fft.h

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

#ifndef XCLONE_DSP_FFT_H_
#define XCLONE_DSP_FFT_H_

#include <complex>
#include <vector>

namespace xclone {
namespace dsp {

// In-place iterative radix-2 FFT.  Size must be a power of two.  The
// inverse transform includes the 1/N scaling.
void fft_radix2(std::vector<std::complex<double>>* x, bool inverse);

bool is_power_of_two(int64_t n);

}  // namespace dsp
}  // namespace xclone

#endif  // XCLONE_DSP_FFT_H_
