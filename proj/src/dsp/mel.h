// src/dsp/mel.h

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

#ifndef XCLONE_DSP_MEL_H_
#define XCLONE_DSP_MEL_H_

#include "base/tensor.h"
#include "dsp/stft.h"
#include "dsp/wav.h"

namespace xclone {
namespace dsp {

// 2595 * log10(1 + f/700) and its inverse.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

struct MelConfig {
  FrameConfig frame;
  int64_t n_mels = 80;
  double fmin_hz = 30.0;  // keeps the lowest FFT bins inside filter support
  double fmax_hz = 11025.0;
  double log_floor = 1e-5;
  void validate(int sample_rate_hz) const;
};

struct MelSpectrogram {
  Tensor frames;  // T x n_mels, log energies >= log(log_floor)
  MelConfig cfg;
  int sample_rate_hz = 22050;
  int64_t num_frames() const { return frames.rows(); }
};

// Triangular filterbank, [n_mels x (fft_size/2+1)], rows with contiguous
// support; centers equally spaced on the mel scale over [fmin, fmax].
Tensor mel_filterbank(const MelConfig& cfg, int sample_rate_hz);

// log(max(filterbank . magnitude, log_floor)) per frame.
MelSpectrogram mel_spectrogram(const Waveform& wave, const MelConfig& cfg);

// Applies an already-built filterbank to a magnitude matrix (helper shared
// by mel_spectrogram and tests).
Tensor apply_filterbank(const Tensor& fb, const Tensor& magnitude);

}  // namespace dsp
}  // namespace xclone

#endif  // XCLONE_DSP_MEL_H_
