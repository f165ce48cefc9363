// src/dsp/stft.cc

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

#include "dsp/stft.h"

#include <cmath>

#include "base/error.h"
#include "dsp/fft.h"

namespace xclone {
namespace dsp {

void FrameConfig::validate() const {
  XC_SHAPE_CHECK(hop_length >= 1 && window_length >= 1 && fft_size >= 1,
                 "frame config fields must be positive");
  XC_SHAPE_CHECK(hop_length <= window_length && window_length <= fft_size,
                 "need hop <= window <= fft_size, got hop=" << hop_length
                     << " window=" << window_length << " fft=" << fft_size);
  XC_SHAPE_CHECK(is_power_of_two(fft_size), "fft_size " << fft_size
                                                        << " must be a power of two");
}

int64_t FrameConfig::num_frames(int64_t num_samples) const {
  XC_CHECK(num_samples >= window_length,
           "input of " << num_samples << " samples is shorter than the "
                       << window_length << "-sample analysis window");
  return 1 + (num_samples - window_length) / hop_length;
}

std::vector<double> hann_window(int64_t n) {
  std::vector<double> w(n);
  for (int64_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

std::vector<std::vector<std::complex<double>>> stft_complex(
    const std::vector<double>& samples, const FrameConfig& cfg) {
  cfg.validate();
  const int64_t T = cfg.num_frames(static_cast<int64_t>(samples.size()));
  const std::vector<double> win = hann_window(cfg.window_length);
  std::vector<std::vector<std::complex<double>>> out(T);
  for (int64_t t = 0; t < T; ++t) {
    std::vector<std::complex<double>> frame(cfg.fft_size, {0.0, 0.0});
    const int64_t off = t * cfg.hop_length;
    for (int64_t i = 0; i < cfg.window_length; ++i)
      frame[i] = std::complex<double>(samples[off + i] * win[i], 0.0);
    fft_radix2(&frame, false);
    out[t] = std::move(frame);
  }
  return out;
}

Tensor stft_magnitude(const Waveform& wave, const FrameConfig& cfg) {
  const auto spectra = stft_complex(wave.samples, cfg);
  const int64_t T = static_cast<int64_t>(spectra.size());
  const int64_t nb = cfg.num_bins();
  Tensor mag({T, nb});
  for (int64_t t = 0; t < T; ++t)
    for (int64_t k = 0; k < nb; ++k) mag.at(t, k) = std::abs(spectra[t][k]);
  XC_NUM_CHECK(mag.all_finite(), "non-finite STFT magnitude");
  return mag;
}

std::vector<double> istft(const std::vector<std::vector<std::complex<double>>>& frames,
                          const FrameConfig& cfg) {
  cfg.validate();
  XC_SHAPE_CHECK(!frames.empty(), "istft: no frames");
  for (const auto& f : frames)
    XC_SHAPE_CHECK(static_cast<int64_t>(f.size()) == cfg.fft_size,
                   "istft: frame has " << f.size() << " bins, expected " << cfg.fft_size);
  const int64_t T = static_cast<int64_t>(frames.size());
  const int64_t len = cfg.window_length + (T - 1) * cfg.hop_length;
  const std::vector<double> win = hann_window(cfg.window_length);
  std::vector<double> acc(len, 0.0), norm(len, 0.0);
  for (int64_t t = 0; t < T; ++t) {
    std::vector<std::complex<double>> frame = frames[t];
    fft_radix2(&frame, true);
    const int64_t off = t * cfg.hop_length;
    for (int64_t i = 0; i < cfg.window_length; ++i) {
      acc[off + i] += win[i] * frame[i].real();
      norm[off + i] += win[i] * win[i];
    }
  }
  for (int64_t i = 0; i < len; ++i) acc[i] /= std::max(norm[i], 1e-8);
  return acc;
}

}  // namespace dsp
}  // namespace xclone
