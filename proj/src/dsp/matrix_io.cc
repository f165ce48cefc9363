// src/dsp/matrix_io.cc

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

#include "dsp/matrix_io.h"

#include <cstring>
#include <sstream>

#include "base/error.h"
#include "base/io.h"

namespace xclone {
namespace dsp {

static const char kMagic[4] = {'X', 'M', 'F', '1'};

void write_matrix_fixture(const std::string& path, const Tensor& m) {
  XC_SHAPE_CHECK(m.ndim() == 2, "matrix fixture requires a 2-D tensor");
  XC_NUM_CHECK(m.all_finite(), "refusing to write non-finite matrix");
  std::vector<uint8_t> out;
  put_bytes(&out, kMagic, 4);
  put_u32(&out, static_cast<uint32_t>(m.rows()));
  put_u32(&out, static_cast<uint32_t>(m.cols()));
  for (double x : m.raw()) put_f32(&out, static_cast<float>(x));
  write_file_bytes(path, out.data(), out.size());
}

Tensor read_matrix_fixture(const std::string& path) {
  const std::vector<uint8_t> bytes = read_file_bytes(path);
  ByteReader r(bytes);
  char magic[4];
  r.bytes(magic, 4);
  XC_CHECK(std::memcmp(magic, kMagic, 4) == 0,
           "'" << path << "' is not a matrix fixture (bad magic)");
  const uint32_t rows = r.u32();
  const uint32_t cols = r.u32();
  XC_CHECK(rows >= 1 && cols >= 1 && static_cast<uint64_t>(rows) * cols <= (1ull << 28),
           "'" << path << "': implausible dims " << rows << "x" << cols);
  Tensor m({static_cast<int64_t>(rows), static_cast<int64_t>(cols)});
  for (int64_t i = 0; i < m.numel(); ++i) m.raw()[i] = static_cast<double>(r.f32());
  XC_CHECK(r.remaining() == 0, "'" << path << "': trailing bytes after matrix data");
  XC_CHECK(m.all_finite(), "'" << path << "': matrix has non-finite entries");
  return m;
}

void write_matrix_csv(const std::string& path, const Tensor& m) {
  XC_SHAPE_CHECK(m.ndim() == 2, "matrix CSV requires a 2-D tensor");
  std::ostringstream ss;
  for (int64_t i = 0; i < m.rows(); ++i) {
    for (int64_t j = 0; j < m.cols(); ++j) {
      if (j) ss << ',';
      ss << format_double(m.at(i, j));
    }
    ss << '\n';
  }
  write_file_text(path, ss.str());
}

Tensor read_matrix_csv(const std::string& path) {
  const std::string text = read_file_text(path);
  std::istringstream ss(text);
  std::string line;
  std::vector<double> data;
  int64_t rows = 0, cols = -1;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cols < 0) cols = static_cast<int64_t>(cells.size());
    XC_CHECK(static_cast<int64_t>(cells.size()) == cols,
             "'" << path << "': ragged CSV at row " << rows);
    for (const std::string& c : cells) data.push_back(parse_double(c, path));
    ++rows;
  }
  XC_CHECK(rows >= 1 && cols >= 1, "'" << path << "': empty matrix CSV");
  return Tensor::from({rows, cols}, std::move(data));
}

}  // namespace dsp
}  // namespace xclone
