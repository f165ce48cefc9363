// src/yin/yin.h

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

#ifndef XCLONE_YIN_YIN_H_
#define XCLONE_YIN_YIN_H_

#include <string>
#include <vector>

#include "dsp/stft.h"
#include "dsp/wav.h"

namespace xclone {
namespace yin {

struct YinConfig {
  dsp::FrameConfig frame;         // window/hop shared with the mel analysis
  double fmin_hz = 65.0;          // search band; covers the corpus speakers
  double fmax_hz = 500.0;
  double harmonicity_threshold = 0.15;  // midpoint of the supported [0.1, 0.25]
  void validate() const;
};

struct PitchContour {
  std::vector<double> f0_hz;   // 0.0 on unvoiced frames
  std::vector<uint8_t> voiced;
  int64_t hop_length_samples = 256;
  int sample_rate_hz = 22050;
  int64_t num_frames() const { return static_cast<int64_t>(f0_hz.size()); }
  int64_t num_voiced() const;
  void check() const;  // f0 > 0 iff voiced, sizes agree
};

// Per frame: difference function d(tau), cumulative-mean normalization
// d'(tau) = d(tau)*tau / sum_{k<=tau} d(k) with d'(0)=1, threshold pick,
// local-minimum refinement over the next 25% of tau, parabolic
// interpolation.  Degenerate (all-zero) frames come out unvoiced.
PitchContour extract_pitch(const dsp::Waveform& wave, const YinConfig& cfg);

// Multiplies voiced f0 so its mean becomes target_mean_hz; voicing
// unchanged.  Rejects all-unvoiced contours.
PitchContour scale_pitch_to_mean(const PitchContour& contour, double target_mean_hz);

// Mean f0 over voiced frames pooled across contours.
double mean_pitch(const std::vector<PitchContour>& contours);

// CSV with header frame,time_s,f0_hz,voiced.
void write_contour_csv(const std::string& path, const PitchContour& contour);
PitchContour read_contour_csv(const std::string& path);

// Cumulative-mean-normalized difference for one frame (exposed for tests):
// values for tau = 0..max_tau, d'(0) = 1.
std::vector<double> cmnd_frame(const double* x, int64_t frame_len, int64_t max_tau);

}  // namespace yin
}  // namespace xclone

#endif  // XCLONE_YIN_YIN_H_
