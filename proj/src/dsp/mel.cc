// src/dsp/mel.cc

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

#include "dsp/mel.h"

#include <cmath>
#include <vector>

#include "base/error.h"

namespace xclone {
namespace dsp {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

void MelConfig::validate(int sample_rate_hz) const {
  frame.validate();
  XC_SHAPE_CHECK(n_mels >= 1, "n_mels must be >= 1");
  XC_CHECK(log_floor > 0.0, "log_floor must be positive");
  XC_CHECK(fmin_hz >= 0.0 && fmin_hz < fmax_hz, "need 0 <= fmin < fmax");
  XC_CHECK(fmax_hz <= sample_rate_hz / 2.0 + 1e-9,
           "fmax " << fmax_hz << " Hz exceeds Nyquist for " << sample_rate_hz << " Hz");
}

Tensor mel_filterbank(const MelConfig& cfg, int sample_rate_hz) {
  cfg.validate(sample_rate_hz);
  const int64_t nb = cfg.frame.num_bins();
  const double mel_lo = hz_to_mel(cfg.fmin_hz);
  const double mel_hi = hz_to_mel(cfg.fmax_hz);
  // n_mels triangles need n_mels + 2 edge points on the mel axis.
  std::vector<double> edges(cfg.n_mels + 2);
  for (int64_t i = 0; i < cfg.n_mels + 2; ++i)
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      static_cast<double>(cfg.n_mels + 1));
  Tensor fb({cfg.n_mels, nb});
  const double bin_hz = static_cast<double>(sample_rate_hz) / cfg.frame.fft_size;
  for (int64_t m = 0; m < cfg.n_mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (int64_t k = 0; k < nb; ++k) {
      const double f = k * bin_hz;
      double w = 0.0;
      if (f > left && f < center) {
        w = (f - left) / (center - left);
      } else if (f == center) {
        w = 1.0;
      } else if (f > center && f < right) {
        w = (right - f) / (right - center);
      }
      fb.at(m, k) = w;
    }
  }
  return fb;
}

Tensor apply_filterbank(const Tensor& fb, const Tensor& magnitude) {
  XC_SHAPE_CHECK(fb.ndim() == 2 && magnitude.ndim() == 2 && fb.cols() == magnitude.cols(),
                 "filterbank bins " << fb.cols() << " vs magnitude bins "
                                    << magnitude.cols());
  const int64_t T = magnitude.rows(), M = fb.rows(), nb = fb.cols();
  Tensor out({T, M});
  for (int64_t t = 0; t < T; ++t)
    for (int64_t m = 0; m < M; ++m) {
      double s = 0.0;
      for (int64_t k = 0; k < nb; ++k) s += fb.at(m, k) * magnitude.at(t, k);
      out.at(t, m) = s;
    }
  return out;
}

MelSpectrogram mel_spectrogram(const Waveform& wave, const MelConfig& cfg) {
  cfg.validate(wave.sample_rate_hz);
  const Tensor mag = stft_magnitude(wave, cfg.frame);
  const Tensor fb = mel_filterbank(cfg, wave.sample_rate_hz);
  Tensor mel = apply_filterbank(fb, mag);
  for (double& x : mel.raw()) x = std::log(std::max(x, cfg.log_floor));
  XC_NUM_CHECK(mel.all_finite(), "non-finite mel energies");
  MelSpectrogram out;
  out.frames = std::move(mel);
  out.cfg = cfg;
  out.sample_rate_hz = wave.sample_rate_hz;
  return out;
}

}  // namespace dsp
}  // namespace xclone
