// src/dsp/wav.h

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

#ifndef XCLONE_DSP_WAV_H_
#define XCLONE_DSP_WAV_H_

#include <string>
#include <vector>

namespace xclone {
namespace dsp {

// Mono audio, samples in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = 22050;
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// PCM16 mono little-endian only.  Anything else (stereo, other encodings,
// truncated chunks) is rejected with a format error.  Round trip is exact
// to within half a 16-bit quantization step.
Waveform read_wav(const std::string& path);
void write_wav(const std::string& path, const Waveform& wave);

}  // namespace dsp
}  // namespace xclone

#endif  // XCLONE_DSP_WAV_H_
