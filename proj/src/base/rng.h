// src/base/rng.h

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

#ifndef XCLONE_BASE_RNG_H_
#define XCLONE_BASE_RNG_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace xclone {

// Deterministic random stream.  All sampling is implemented on top of raw
// mt19937_64 words (which the standard pins down exactly); none of the
// std::*_distribution classes are used, so identical seeds give identical
// streams on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1), 53 bits of entropy.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller.  The spare value is cached, so draw
  // order matters for reproducibility (as with any stateful stream).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Unbiased integer in [0, n).
  int64_t randint(int64_t n);

  // Fisher-Yates permutation of 0..n-1.
  std::vector<int64_t> permutation(int64_t n);

  // Derives an independent child seed from a parent seed and a tag.
  // Pure function of its arguments, so derived streams do not depend on
  // call order.
  static uint64_t derive(uint64_t seed, std::string_view tag);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a 64-bit hash, used for config/provenance hashes.
uint64_t fnv1a64(const void* data, size_t n, uint64_t basis = 0xcbf29ce484222325ull);
uint64_t fnv1a64(std::string_view s);

}  // namespace xclone

#endif  // XCLONE_BASE_RNG_H_
