// src/ad/checkpoint.cc

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

#include "ad/checkpoint.h"

#include <cstring>
#include <vector>

#include "base/error.h"
#include "base/io.h"

namespace xclone {
namespace ad {

static const char kMagic[4] = {'X', 'C', 'K', '1'};
static constexpr uint32_t kVersion = 1;
static constexpr uint32_t kMaxStr = 1 << 20;

static void put_str(std::vector<uint8_t>* out, const std::string& s) {
  put_u32(out, static_cast<uint32_t>(s.size()));
  put_bytes(out, s.data(), s.size());
}

static std::string get_str(ByteReader* r) {
  const uint32_t n = r->u32();
  XC_CHECK(n <= kMaxStr, "checkpoint string length " << n << " implausible");
  return r->str(n);
}

void save_checkpoint(const std::string& path, const ParamStore& params,
                     const std::map<std::string, std::string>& metadata) {
  std::vector<uint8_t> out;
  put_bytes(&out, kMagic, 4);
  put_u32(&out, kVersion);
  put_u32(&out, static_cast<uint32_t>(metadata.size()));
  for (const auto& [k, v] : metadata) {
    put_str(&out, k);
    put_str(&out, v);
  }
  put_u32(&out, static_cast<uint32_t>(params.size()));
  for (const auto& [name, t] : params.items()) {
    XC_NUM_CHECK(t.all_finite(), "refusing to save non-finite parameter '" << name << "'");
    put_str(&out, name);
    put_u32(&out, static_cast<uint32_t>(t.ndim()));
    for (int64_t d : t.shape()) put_i64(&out, d);
    for (double x : t.raw()) put_f64(&out, x);
  }
  write_file_bytes(path, out.data(), out.size());
}

Checkpoint load_checkpoint(const std::string& path) {
  const std::vector<uint8_t> bytes = read_file_bytes(path);
  ByteReader r(bytes);
  char magic[4];
  r.bytes(magic, 4);
  XC_CHECK(std::memcmp(magic, kMagic, 4) == 0,
           "'" << path << "' is not a parameter checkpoint (bad magic)");
  const uint32_t version = r.u32();
  XC_CHECK(version == kVersion,
           "unsupported checkpoint version " << version << " in '" << path << "'");
  Checkpoint ckpt;
  const uint32_t n_meta = r.u32();
  for (uint32_t i = 0; i < n_meta; ++i) {
    std::string k = get_str(&r);
    std::string v = get_str(&r);
    ckpt.metadata.emplace(std::move(k), std::move(v));
  }
  const uint32_t n_tensors = r.u32();
  for (uint32_t i = 0; i < n_tensors; ++i) {
    std::string name = get_str(&r);
    const uint32_t ndim = r.u32();
    XC_CHECK(ndim >= 1 && ndim <= 4, "tensor '" << name << "' has ndim " << ndim);
    std::vector<int64_t> shape(ndim);
    int64_t numel = 1;
    for (uint32_t d = 0; d < ndim; ++d) {
      shape[d] = r.i64();
      XC_CHECK(shape[d] >= 1 && shape[d] <= (1 << 24), "bad dim " << shape[d]
                                                                  << " in tensor '"
                                                                  << name << "'");
      numel *= shape[d];
    }
    Tensor t(shape);
    for (int64_t j = 0; j < numel; ++j) t.raw()[j] = r.f64();
    XC_CHECK(t.all_finite(), "checkpoint tensor '" << name << "' has non-finite values");
    ckpt.params.create(name, std::move(t));
  }
  XC_CHECK(r.remaining() == 0, "trailing bytes after checkpoint payload in '" << path << "'");
  return ckpt;
}

}  // namespace ad
}  // namespace xclone
