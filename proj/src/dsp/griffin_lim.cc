// src/dsp/griffin_lim.cc

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

#include "dsp/griffin_lim.h"

#include <cmath>
#include <complex>

#include "base/error.h"

namespace xclone {
namespace dsp {

namespace {

// Expands one-sided complex frames to the full conjugate-symmetric spectrum.
std::vector<std::vector<std::complex<double>>> full_spectrum(
    const std::vector<std::vector<std::complex<double>>>& onesided, int64_t fft_size) {
  const int64_t nb = fft_size / 2 + 1;
  std::vector<std::vector<std::complex<double>>> full(onesided.size());
  for (size_t t = 0; t < onesided.size(); ++t) {
    full[t].assign(fft_size, {0.0, 0.0});
    for (int64_t k = 0; k < nb; ++k) full[t][k] = onesided[t][k];
    for (int64_t k = 1; k < fft_size / 2; ++k)
      full[t][fft_size - k] = std::conj(onesided[t][k]);
  }
  return full;
}

double mag_distance(const std::vector<std::vector<std::complex<double>>>& spectra,
                    const Tensor& target, int64_t nb) {
  double d = 0.0;
  for (int64_t t = 0; t < target.rows(); ++t)
    for (int64_t k = 0; k < nb; ++k) {
      const double diff = std::abs(spectra[t][k]) - target.at(t, k);
      d += diff * diff;
    }
  return std::sqrt(d);
}

}  // namespace

Tensor solve_linear(const Tensor& a, const Tensor& b) {
  XC_SHAPE_CHECK(a.ndim() == 2 && a.rows() == a.cols() && b.rows() == a.rows(),
                 "solve_linear: need square A matching B rows");
  const int64_t n = a.rows(), m = b.cols();
  Tensor aug = a;
  Tensor x = b;
  for (int64_t col = 0; col < n; ++col) {
    int64_t piv = col;
    for (int64_t r = col + 1; r < n; ++r)
      if (std::fabs(aug.at(r, col)) > std::fabs(aug.at(piv, col))) piv = r;
    XC_NUM_CHECK(std::fabs(aug.at(piv, col)) > 1e-300,
                 "solve_linear: singular matrix at column " << col);
    if (piv != col) {
      for (int64_t j = 0; j < n; ++j) std::swap(aug.at(col, j), aug.at(piv, j));
      for (int64_t j = 0; j < m; ++j) std::swap(x.at(col, j), x.at(piv, j));
    }
    const double inv = 1.0 / aug.at(col, col);
    for (int64_t r = col + 1; r < n; ++r) {
      const double f = aug.at(r, col) * inv;
      if (f == 0.0) continue;
      for (int64_t j = col; j < n; ++j) aug.at(r, j) -= f * aug.at(col, j);
      for (int64_t j = 0; j < m; ++j) x.at(r, j) -= f * x.at(col, j);
    }
  }
  for (int64_t col = n - 1; col >= 0; --col) {
    const double inv = 1.0 / aug.at(col, col);
    for (int64_t j = 0; j < m; ++j) x.at(col, j) *= inv;
    for (int64_t r = 0; r < col; ++r) {
      const double f = aug.at(r, col);
      if (f == 0.0) continue;
      for (int64_t j = 0; j < m; ++j) x.at(r, j) -= f * x.at(col, j);
    }
  }
  return x;
}

GriffinLimResult griffin_lim(const Tensor& magnitude, const FrameConfig& cfg,
                             int sample_rate_hz, int n_iters) {
  cfg.validate();
  XC_CHECK(n_iters >= 1, "griffin_lim needs at least one iteration");
  const int64_t nb = cfg.num_bins();
  XC_SHAPE_CHECK(magnitude.ndim() == 2 && magnitude.cols() == nb,
                 "magnitude has " << magnitude.cols() << " bins, config expects " << nb);
  const int64_t T = magnitude.rows();
  // Zero phase init: spectra start out real and nonnegative.
  std::vector<std::vector<std::complex<double>>> S(T);
  for (int64_t t = 0; t < T; ++t) {
    S[t].assign(nb, {0.0, 0.0});
    for (int64_t k = 0; k < nb; ++k) S[t][k] = std::complex<double>(magnitude.at(t, k), 0.0);
  }
  GriffinLimResult res;
  std::vector<double> x;
  for (int it = 0; it < n_iters; ++it) {
    x = istft(full_spectrum(S, cfg.fft_size), cfg);
    const auto reanalysis = stft_complex(x, cfg);
    res.distance_trace.push_back(mag_distance(reanalysis, magnitude, nb));
    for (int64_t t = 0; t < T; ++t)
      for (int64_t k = 0; k < nb; ++k) {
        const double m = std::abs(reanalysis[t][k]);
        // Keep the re-analyzed phase, restore the target magnitude.
        S[t][k] = m > 0.0 ? reanalysis[t][k] * (magnitude.at(t, k) / m)
                          : std::complex<double>(magnitude.at(t, k), 0.0);
      }
  }
  x = istft(full_spectrum(S, cfg.fft_size), cfg);
  double peak = 0.0;
  for (double s : x) peak = std::max(peak, std::fabs(s));
  if (peak > 1.0) {
    const double g = 0.99 / peak;
    for (double& s : x) s *= g;
  }
  res.wave.samples = std::move(x);
  res.wave.sample_rate_hz = sample_rate_hz;
  return res;
}

Tensor mel_to_magnitude(const MelSpectrogram& mel) {
  const Tensor fb = mel_filterbank(mel.cfg, mel.sample_rate_hz);
  const int64_t M = fb.rows(), nb = fb.cols(), T = mel.frames.rows();
  XC_SHAPE_CHECK(mel.frames.cols() == M, "mel has " << mel.frames.cols()
                                                    << " channels, config expects " << M);
  // gram = FB FB^T
  Tensor gram({M, M});
  for (int64_t i = 0; i < M; ++i)
    for (int64_t j = 0; j < M; ++j) {
      double s = 0.0;
      for (int64_t k = 0; k < nb; ++k) s += fb.at(i, k) * fb.at(j, k);
      gram.at(i, j) = s;
    }
  // rhs = linear-energy mel, frames as columns
  Tensor rhs({M, T});
  for (int64_t t = 0; t < T; ++t)
    for (int64_t m = 0; m < M; ++m) rhs.at(m, t) = std::exp(mel.frames.at(t, m));
  const Tensor y = solve_linear(gram, rhs);  // [M, T]
  Tensor mag({T, nb});
  for (int64_t t = 0; t < T; ++t)
    for (int64_t k = 0; k < nb; ++k) {
      double s = 0.0;
      for (int64_t m = 0; m < M; ++m) s += fb.at(m, k) * y.at(m, t);
      mag.at(t, k) = std::max(s, 0.0);
    }
  return mag;
}

GriffinLimResult griffin_lim_mel(const MelSpectrogram& mel, int n_iters) {
  return griffin_lim(mel_to_magnitude(mel), mel.cfg.frame, mel.sample_rate_hz, n_iters);
}

}  // namespace dsp
}  // namespace xclone
