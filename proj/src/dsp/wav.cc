// src/dsp/wav.cc

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

#include "dsp/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "base/error.h"
#include "base/io.h"

namespace xclone {
namespace dsp {

namespace {

void put_u16(std::vector<uint8_t>* out, uint16_t v) {
  out->push_back(static_cast<uint8_t>(v & 0xff));
  out->push_back(static_cast<uint8_t>(v >> 8));
}

uint16_t get_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t get_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

}  // namespace

Waveform read_wav(const std::string& path) {
  const std::vector<uint8_t> b = read_file_bytes(path);
  XC_CHECK(b.size() >= 12, "'" << path << "': not a WAV file (too short)");
  XC_CHECK(std::memcmp(b.data(), "RIFF", 4) == 0 && std::memcmp(b.data() + 8, "WAVE", 4) == 0,
           "'" << path << "': not a RIFF/WAVE file");
  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  const uint8_t* data = nullptr;
  uint32_t data_size = 0;
  size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const char* tag = reinterpret_cast<const char*>(b.data() + pos);
    const uint32_t chunk_size = get_u32(b.data() + pos + 4);
    const size_t body = pos + 8;
    XC_CHECK(body + chunk_size <= b.size(),
             "'" << path << "': truncated chunk '" << std::string(tag, 4) << "'");
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      XC_CHECK(chunk_size >= 16, "'" << path << "': fmt chunk too small");
      format = get_u16(b.data() + body);
      channels = get_u16(b.data() + body + 2);
      sample_rate = get_u32(b.data() + body + 4);
      bits = get_u16(b.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data = b.data() + body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }
  XC_CHECK(have_fmt && data != nullptr, "'" << path << "': missing fmt or data chunk");
  XC_CHECK(format == 1, "'" << path << "': unsupported encoding " << format
                            << " (PCM16 only)");
  XC_CHECK(channels == 1, "'" << path << "': unsupported channel count " << channels
                              << " (mono only)");
  XC_CHECK(bits == 16, "'" << path << "': unsupported bit depth " << bits
                           << " (16-bit only)");
  XC_CHECK(sample_rate > 0, "'" << path << "': zero sample rate");
  XC_CHECK(data_size % 2 == 0, "'" << path << "': odd PCM16 data size");
  Waveform wave;
  wave.sample_rate_hz = static_cast<int>(sample_rate);
  wave.samples.resize(data_size / 2);
  for (size_t i = 0; i < wave.samples.size(); ++i) {
    const int16_t s = static_cast<int16_t>(get_u16(data + 2 * i));
    wave.samples[i] = std::clamp(static_cast<double>(s) / 32767.0, -1.0, 1.0);
  }
  return wave;
}

void write_wav(const std::string& path, const Waveform& wave) {
  XC_CHECK(wave.sample_rate_hz > 0, "waveform has non-positive sample rate");
  XC_NUM_CHECK(std::all_of(wave.samples.begin(), wave.samples.end(),
                           [](double s) { return std::isfinite(s); }),
               "refusing to write non-finite samples");
  const uint32_t data_size = static_cast<uint32_t>(wave.samples.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_size);
  put_bytes(&out, "RIFF", 4);
  put_u32(&out, 36 + data_size);
  put_bytes(&out, "WAVE", 4);
  put_bytes(&out, "fmt ", 4);
  put_u32(&out, 16);
  put_u16(&out, 1);  // PCM
  put_u16(&out, 1);  // mono
  put_u32(&out, static_cast<uint32_t>(wave.sample_rate_hz));
  put_u32(&out, static_cast<uint32_t>(wave.sample_rate_hz) * 2);  // byte rate
  put_u16(&out, 2);   // block align
  put_u16(&out, 16);  // bits
  put_bytes(&out, "data", 4);
  put_u32(&out, data_size);
  for (double s : wave.samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    const int16_t q = static_cast<int16_t>(std::lround(clamped * 32767.0));
    put_u16(&out, static_cast<uint16_t>(q));
  }
  write_file_bytes(path, out.data(), out.size());
}

}  // namespace dsp
}  // namespace xclone
