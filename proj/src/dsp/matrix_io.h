// src/dsp/matrix_io.h

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

#ifndef XCLONE_DSP_MATRIX_IO_H_
#define XCLONE_DSP_MATRIX_IO_H_

#include <string>

#include "base/tensor.h"

namespace xclone {
namespace dsp {

// Binary matrix fixture: magic "XMF1", u32 rows, u32 cols, row-major
// little-endian f32 data.  Used for mel features and similar bulk fixtures
// where CSV would be wasteful.
void write_matrix_fixture(const std::string& path, const Tensor& m);
Tensor read_matrix_fixture(const std::string& path);

// Plain CSV, one matrix row per line, shortest round-trip formatting.
void write_matrix_csv(const std::string& path, const Tensor& m);
Tensor read_matrix_csv(const std::string& path);

}  // namespace dsp
}  // namespace xclone

#endif  // XCLONE_DSP_MATRIX_IO_H_
