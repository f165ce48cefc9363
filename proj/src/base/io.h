// src/base/io.h

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

#ifndef XCLONE_BASE_IO_H_
#define XCLONE_BASE_IO_H_

#include <cstdint>
#include <string>
#include <vector>

namespace xclone {

std::vector<uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const void* data, size_t n);
std::string read_file_text(const std::string& path);
void write_file_text(const std::string& path, const std::string& text);

// Little-endian scalar append/read for the binary fixture and checkpoint
// formats.  Reads throw DataError on truncation.
void put_u32(std::vector<uint8_t>* out, uint32_t v);
void put_i64(std::vector<uint8_t>* out, int64_t v);
void put_f32(std::vector<uint8_t>* out, float v);
void put_f64(std::vector<uint8_t>* out, double v);
void put_bytes(std::vector<uint8_t>* out, const void* data, size_t n);

class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t n) : data_(data), size_(n) {}
  explicit ByteReader(const std::vector<uint8_t>& bytes)
      : ByteReader(bytes.data(), bytes.size()) {}
  uint32_t u32();
  int64_t i64();
  float f32();
  double f64();
  void bytes(void* out, size_t n);
  std::string str(size_t n);
  size_t remaining() const { return size_ - pos_; }

 private:
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
};

// Splits one CSV line on commas; no quoting (none of our formats need it).
std::vector<std::string> split_csv_line(const std::string& line);
double parse_double(const std::string& s, const std::string& what);
int64_t parse_int(const std::string& s, const std::string& what);

// Shortest round-trip double formatting used by all CSV writers.
std::string format_double(double v);

}  // namespace xclone

#endif  // XCLONE_BASE_IO_H_
