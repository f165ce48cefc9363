// src/ad/checkpoint.h

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

#ifndef XCLONE_AD_CHECKPOINT_H_
#define XCLONE_AD_CHECKPOINT_H_

#include <map>
#include <string>

#include "ad/params.h"

namespace xclone {
namespace ad {

// Versioned binary parameter checkpoint shared by every trainable module:
//   magic "XCK1", u32 version,
//   u32 n_meta,    n_meta   x (str key, str value)
//   u32 n_tensors, n_tensors x (str name, u32 ndim, i64 dims..., f64 data...)
// Strings are u32 length + raw bytes; all scalars little-endian.
struct Checkpoint {
  std::map<std::string, std::string> metadata;
  ParamStore params;
};

void save_checkpoint(const std::string& path, const ParamStore& params,
                     const std::map<std::string, std::string>& metadata);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ad
}  // namespace xclone

#endif  // XCLONE_AD_CHECKPOINT_H_
