// tests/test_yin.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "base/error.h"
#include "base/io.h"
#include "base/rng.h"
#include "dsp/wav.h"
#include "oracles.h"
#include "yin/yin.h"

using namespace xclone;
using dsp::Waveform;
using yin::PitchContour;
using yin::YinConfig;

namespace {

Waveform sine_wave(double freq_hz, double seconds, int sr = 22050, double amp = 0.5) {
  Waveform w;
  w.sample_rate_hz = sr;
  const int64_t n = static_cast<int64_t>(seconds * sr);
  w.samples.resize(n);
  for (int64_t i = 0; i < n; ++i)
    w.samples[i] = amp * std::sin(2.0 * M_PI * freq_hz * i / sr);
  return w;
}

PitchContour make_contour(std::vector<double> f0) {
  PitchContour c;
  for (double v : f0) {
    c.f0_hz.push_back(v);
    c.voiced.push_back(v > 0.0 ? 1 : 0);
  }
  return c;
}

}  // namespace

TEST_CASE("cmnd matches the brute-force oracle exactly") {
  Rng rng(51);
  std::vector<double> x(400);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  const int64_t max_tau = 150;
  const std::vector<double> fast = yin::cmnd_frame(x.data(), 400, max_tau);
  const std::vector<double> slow = oracle::cmnd_bruteforce(x, max_tau);
  REQUIRE(fast.size() == slow.size());
  CHECK(fast[0] == 1.0);
  for (size_t i = 0; i < fast.size(); ++i)
    CHECK(fast[i] == doctest::Approx(slow[i]).epsilon(1e-12));
}

TEST_CASE("220 Hz sine is fully voiced within one hertz") {
  Waveform w = sine_wave(220.0, 0.5);
  YinConfig cfg;
  PitchContour c = yin::extract_pitch(w, cfg);
  REQUIRE(c.num_frames() > 10);
  CHECK(c.num_voiced() == c.num_frames());
  for (int64_t t = 0; t < c.num_frames(); ++t)
    CHECK(c.f0_hz[t] == doctest::Approx(220.0).epsilon(1.0 / 220.0));

  // Brute-force autocorrelation oracle on the first frame agrees.
  const int64_t tau_min = 45, tau_max = 339;
  int64_t best = tau_min;
  double best_v = -1e300;
  for (int64_t tau = tau_min; tau <= tau_max; ++tau) {
    double acc = 0.0;
    for (int64_t j = 0; j + tau < 1024; ++j) acc += w.samples[j] * w.samples[j + tau];
    if (acc > best_v) {
      best_v = acc;
      best = tau;
    }
  }
  CHECK(std::fabs(22050.0 / best - 220.0) < 2.5);  // integer-lag quantization
  CHECK(std::fabs(c.f0_hz[0] - 22050.0 / best) < 2.5);
}

TEST_CASE("voicing decisions equal the threshold definition applied to exhaustive d'") {
  Rng rng(77);
  // Mixture: a sine burst followed by low-amplitude noise.
  Waveform w;
  w.sample_rate_hz = 22050;
  w.samples.resize(11025);
  for (int64_t i = 0; i < 5000; ++i)
    w.samples[i] = 0.4 * std::sin(2.0 * M_PI * 180.0 * i / 22050.0);
  for (int64_t i = 5000; i < 11025; ++i) w.samples[i] = 0.05 * rng.uniform(-1.0, 1.0);
  YinConfig cfg;
  PitchContour c = yin::extract_pitch(w, cfg);
  const int64_t tau_min = 45, tau_max = 339, lag_hi = 340;
  for (int64_t t = 0; t < c.num_frames(); ++t) {
    std::vector<double> frame(w.samples.begin() + t * 256,
                              w.samples.begin() + t * 256 + 1024);
    const std::vector<double> dp = oracle::cmnd_bruteforce(frame, lag_hi);
    bool oracle_voiced = false;
    for (int64_t tau = tau_min; tau <= tau_max; ++tau)
      if (dp[tau] < cfg.harmonicity_threshold) {
        oracle_voiced = true;
        break;
      }
    INFO("frame " << t);
    CHECK((c.voiced[t] != 0) == oracle_voiced);
  }
}

TEST_CASE("low-amplitude white noise is at least 90% unvoiced") {
  Rng rng(101);
  Waveform w;
  w.sample_rate_hz = 22050;
  w.samples.resize(22050);
  for (double& s : w.samples) s = 0.05 * rng.uniform(-1.0, 1.0);
  PitchContour c = yin::extract_pitch(w, YinConfig{});
  CHECK(static_cast<double>(c.num_frames() - c.num_voiced()) >=
        0.9 * static_cast<double>(c.num_frames()));
}

TEST_CASE("silence is entirely unvoiced with zero f0") {
  Waveform w;
  w.sample_rate_hz = 22050;
  w.samples.assign(8192, 0.0);
  PitchContour c = yin::extract_pitch(w, YinConfig{});
  CHECK(c.num_voiced() == 0);
  for (double f : c.f0_hz) CHECK(f == 0.0);
}

TEST_CASE("raising the harmonicity threshold never loses voiced frames") {
  Rng rng(7);
  Waveform w;
  w.sample_rate_hz = 22050;
  w.samples.resize(16384);
  for (int64_t i = 0; i < 16384; ++i)
    w.samples[i] = 0.2 * std::sin(2.0 * M_PI * 140.0 * i / 22050.0) +
                   0.15 * rng.uniform(-1.0, 1.0);
  int64_t prev = -1;
  for (double th : {0.1, 0.15, 0.2, 0.25}) {
    YinConfig cfg;
    cfg.harmonicity_threshold = th;
    const int64_t nv = yin::extract_pitch(w, cfg).num_voiced();
    CHECK(nv >= prev);
    prev = nv;
  }
}

TEST_CASE("waveform shorter than two max periods is rejected") {
  Waveform w;
  w.sample_rate_hz = 22050;
  w.samples.assign(500, 0.1);  // 2 * floor(22050/65) = 678
  CHECK_THROWS_AS(yin::extract_pitch(w, YinConfig{}), DataError);
}

// ---------------------------------------------------------------------------
// contour arithmetic

TEST_CASE("scaling [200,200] to target 100 halves the contour") {
  PitchContour c = make_contour({200.0, 200.0});
  PitchContour s = yin::scale_pitch_to_mean(c, 100.0);
  CHECK(s.f0_hz[0] == doctest::Approx(100.0));
  CHECK(s.f0_hz[1] == doctest::Approx(100.0));
}

TEST_CASE("scaling [100,300] to target 100 is linear, not additive") {
  PitchContour c = make_contour({100.0, 300.0});
  PitchContour s = yin::scale_pitch_to_mean(c, 100.0);
  CHECK(s.f0_hz[0] == doctest::Approx(50.0));
  CHECK(s.f0_hz[1] == doctest::Approx(150.0));
}

TEST_CASE("scaling to the current mean is a bit-exact no-op") {
  PitchContour c = make_contour({110.0, 0.0, 220.0, 330.0});
  const double mean = yin::mean_pitch({c});
  PitchContour s = yin::scale_pitch_to_mean(c, mean);
  for (size_t i = 0; i < c.f0_hz.size(); ++i) {
    CHECK(s.f0_hz[i] == c.f0_hz[i]);
    CHECK(s.voiced[i] == c.voiced[i]);
  }
}

TEST_CASE("rescaling composes: via m1 to m2 equals direct to m2") {
  PitchContour c = make_contour({90.0, 0.0, 180.0, 270.0, 0.0});
  PitchContour via = yin::scale_pitch_to_mean(yin::scale_pitch_to_mean(c, 140.0), 205.0);
  PitchContour direct = yin::scale_pitch_to_mean(c, 205.0);
  for (size_t i = 0; i < c.f0_hz.size(); ++i)
    CHECK(via.f0_hz[i] == doctest::Approx(direct.f0_hz[i]).epsilon(1e-12));
}

TEST_CASE("scaling keeps unvoiced frames at zero and flags intact") {
  PitchContour c = make_contour({0.0, 150.0, 0.0});
  PitchContour s = yin::scale_pitch_to_mean(c, 300.0);
  CHECK(s.f0_hz[0] == 0.0);
  CHECK(s.voiced[0] == 0);
  CHECK(s.f0_hz[1] == doctest::Approx(300.0));
  CHECK(s.f0_hz[2] == 0.0);
}

TEST_CASE("all-unvoiced contour cannot be scaled") {
  PitchContour c = make_contour({0.0, 0.0});
  CHECK_THROWS_AS(yin::scale_pitch_to_mean(c, 100.0), DataError);
}

TEST_CASE("mean pitch averages voiced frames, pooled across contours") {
  CHECK(yin::mean_pitch({make_contour({100.0, 200.0, 300.0})}) == doctest::Approx(200.0));
  CHECK(yin::mean_pitch({make_contour({100.0}), make_contour({300.0})}) ==
        doctest::Approx(200.0));
  CHECK(yin::mean_pitch({make_contour({150.0, 0.0, 0.0})}) == doctest::Approx(150.0));
  CHECK_THROWS_AS(yin::mean_pitch({make_contour({0.0, 0.0})}), DataError);
}

TEST_CASE("contour CSV round-trips values, voicing, and framing") {
  Waveform w = sine_wave(196.0, 0.4);
  PitchContour c = yin::extract_pitch(w, YinConfig{});
  const std::string path = "contour_roundtrip_test.csv";
  yin::write_contour_csv(path, c);
  PitchContour r = yin::read_contour_csv(path);
  REQUIRE(r.num_frames() == c.num_frames());
  CHECK(r.hop_length_samples == c.hop_length_samples);
  for (int64_t i = 0; i < c.num_frames(); ++i) {
    CHECK(r.f0_hz[i] == c.f0_hz[i]);
    CHECK(r.voiced[i] == c.voiced[i]);
  }
  std::remove(path.c_str());
}

TEST_CASE("contour CSV without the header is rejected") {
  const std::string path = "contour_bad_test.csv";
  write_file_text(path, "0,0.0,100.0,1\n");
  CHECK_THROWS_AS(yin::read_contour_csv(path), DataError);
  std::remove(path.c_str());
}
