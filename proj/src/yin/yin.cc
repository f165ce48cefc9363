// src/yin/yin.cc

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

#include "yin/yin.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "base/error.h"
#include "base/io.h"

namespace xclone {
namespace yin {

void YinConfig::validate() const {
  frame.validate();
  XC_CHECK(harmonicity_threshold >= 0.1 && harmonicity_threshold <= 0.25,
           "harmonicity threshold " << harmonicity_threshold
                                    << " outside the supported [0.1, 0.25] band");
  XC_CHECK(fmin_hz > 0.0 && fmin_hz < fmax_hz, "need 0 < fmin < fmax");
}

int64_t PitchContour::num_voiced() const {
  int64_t n = 0;
  for (uint8_t v : voiced) n += v ? 1 : 0;
  return n;
}

void PitchContour::check() const {
  XC_SHAPE_CHECK(f0_hz.size() == voiced.size(), "contour f0/voicing length mismatch");
  XC_CHECK(hop_length_samples >= 1 && sample_rate_hz >= 1, "bad contour framing");
  for (size_t i = 0; i < f0_hz.size(); ++i) {
    XC_CHECK(std::isfinite(f0_hz[i]), "non-finite f0 at frame " << i);
    XC_CHECK((f0_hz[i] > 0.0) == (voiced[i] != 0),
             "frame " << i << ": f0 " << f0_hz[i] << " inconsistent with voicing");
  }
}

std::vector<double> cmnd_frame(const double* x, int64_t frame_len, int64_t max_tau) {
  XC_SHAPE_CHECK(max_tau >= 1 && max_tau < frame_len, "max_tau " << max_tau
                                                                 << " vs frame length "
                                                                 << frame_len);
  const int64_t w = frame_len - max_tau;  // integration window
  std::vector<double> d(max_tau + 1, 0.0);
  for (int64_t tau = 1; tau <= max_tau; ++tau) {
    double s = 0.0;
    for (int64_t j = 0; j < w; ++j) {
      const double diff = x[j] - x[j + tau];
      s += diff * diff;
    }
    d[tau] = s;
  }
  std::vector<double> dp(max_tau + 1, 1.0);  // d'(0) = 1 by convention
  double running = 0.0;
  for (int64_t tau = 1; tau <= max_tau; ++tau) {
    running += d[tau];
    // All-zero frames keep d' at 1 (never a division error).
    dp[tau] = running > 0.0 ? d[tau] * static_cast<double>(tau) / running : 1.0;
  }
  return dp;
}

PitchContour extract_pitch(const dsp::Waveform& wave, const YinConfig& cfg) {
  cfg.validate();
  const double sr = static_cast<double>(wave.sample_rate_hz);
  const int64_t tau_min = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(sr / cfg.fmax_hz)));
  const int64_t tau_max = static_cast<int64_t>(std::floor(sr / cfg.fmin_hz));
  XC_CHECK(static_cast<int64_t>(wave.samples.size()) >= 2 * tau_max,
           "waveform of " << wave.samples.size()
                          << " samples is shorter than two max-f0 periods ("
                          << 2 * tau_max << ")");
  XC_SHAPE_CHECK(tau_max + 1 < cfg.frame.window_length,
                 "analysis window " << cfg.frame.window_length
                                    << " too short for fmin " << cfg.fmin_hz << " Hz");
  const int64_t T = cfg.frame.num_frames(static_cast<int64_t>(wave.samples.size()));
  // One extra lag so parabolic interpolation at tau_max has a right neighbor.
  const int64_t lag_hi = std::min(tau_max + 1, cfg.frame.window_length - 1);

  PitchContour out;
  out.hop_length_samples = cfg.frame.hop_length;
  out.sample_rate_hz = wave.sample_rate_hz;
  out.f0_hz.assign(T, 0.0);
  out.voiced.assign(T, 0);

  for (int64_t t = 0; t < T; ++t) {
    const double* x = wave.samples.data() + t * cfg.frame.hop_length;
    const std::vector<double> dp = cmnd_frame(x, cfg.frame.window_length, lag_hi);
    // Smallest tau under the harmonicity threshold.
    int64_t cand = -1;
    for (int64_t tau = tau_min; tau <= tau_max; ++tau) {
      if (dp[tau] < cfg.harmonicity_threshold) {
        cand = tau;
        break;
      }
    }
    if (cand < 0) continue;  // unvoiced
    // Local-minimum refinement within the next 25% of the period (octave
    // guard): the threshold can fire on the rising edge of the dip.
    int64_t best = cand;
    const int64_t hi = std::min(cand + cand / 4, tau_max);
    for (int64_t tau = cand + 1; tau <= hi; ++tau)
      if (dp[tau] < dp[best]) best = tau;
    double tau_est = static_cast<double>(best);
    if (best > 1 && best + 1 <= lag_hi) {
      const double a = dp[best - 1], b = dp[best], c = dp[best + 1];
      const double denom = a - 2.0 * b + c;
      if (std::fabs(denom) > 1e-12) {
        const double shift = 0.5 * (a - c) / denom;
        if (std::fabs(shift) <= 1.0) tau_est += shift;
      }
    }
    const double f0 = std::clamp(sr / tau_est, cfg.fmin_hz, cfg.fmax_hz);
    out.f0_hz[t] = f0;
    out.voiced[t] = 1;
  }
  out.check();
  return out;
}

PitchContour scale_pitch_to_mean(const PitchContour& contour, double target_mean_hz) {
  contour.check();
  XC_CHECK(target_mean_hz > 0.0, "target mean pitch must be positive");
  XC_CHECK(contour.num_voiced() > 0,
           "cannot scale an all-unvoiced contour (mean pitch undefined)");
  const double factor = target_mean_hz / mean_pitch({contour});
  PitchContour out = contour;
  for (size_t i = 0; i < out.f0_hz.size(); ++i)
    if (out.voiced[i]) out.f0_hz[i] *= factor;
  return out;
}

double mean_pitch(const std::vector<PitchContour>& contours) {
  double sum = 0.0;
  int64_t n = 0;
  for (const PitchContour& c : contours) {
    c.check();
    for (size_t i = 0; i < c.f0_hz.size(); ++i) {
      if (!c.voiced[i]) continue;
      sum += c.f0_hz[i];
      ++n;
    }
  }
  XC_CHECK(n > 0, "no voiced frames across " << contours.size() << " contours");
  return sum / static_cast<double>(n);
}

void write_contour_csv(const std::string& path, const PitchContour& contour) {
  contour.check();
  std::ostringstream ss;
  ss << "frame,time_s,f0_hz,voiced\n";
  for (int64_t i = 0; i < contour.num_frames(); ++i) {
    const double time_s = static_cast<double>(i * contour.hop_length_samples) /
                          contour.sample_rate_hz;
    ss << i << ',' << format_double(time_s) << ',' << format_double(contour.f0_hz[i])
       << ',' << (contour.voiced[i] ? 1 : 0) << '\n';
  }
  write_file_text(path, ss.str());
}

PitchContour read_contour_csv(const std::string& path) {
  const std::string text = read_file_text(path);
  std::istringstream ss(text);
  std::string line;
  XC_CHECK(std::getline(ss, line) && line.rfind("frame,time_s,f0_hz,voiced", 0) == 0,
           "'" << path << "': missing contour CSV header");
  PitchContour out;
  double prev_time = -1.0;
  std::vector<double> times;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    XC_CHECK(cells.size() == 4, "'" << path << "': expected 4 columns, got "
                                    << cells.size());
    const int64_t frame = parse_int(cells[0], path);
    XC_CHECK(frame == out.num_frames(), "'" << path << "': non-contiguous frame index "
                                            << frame);
    const double time_s = parse_double(cells[1], path);
    XC_CHECK(time_s > prev_time, "'" << path << "': non-monotonic time at frame " << frame);
    prev_time = time_s;
    times.push_back(time_s);
    out.f0_hz.push_back(parse_double(cells[2], path));
    const int64_t v = parse_int(cells[3], path);
    XC_CHECK(v == 0 || v == 1, "'" << path << "': voiced flag must be 0/1");
    out.voiced.push_back(static_cast<uint8_t>(v));
  }
  XC_CHECK(!out.f0_hz.empty(), "'" << path << "': empty contour");
  if (times.size() >= 2) {
    const double hop_s = times[1] - times[0];
    out.hop_length_samples = std::max<int64_t>(1, std::llround(hop_s * out.sample_rate_hz));
  }
  out.check();
  return out;
}

}  // namespace yin
}  // namespace xclone
