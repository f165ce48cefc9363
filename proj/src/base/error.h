// src/base/error.h

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

#ifndef XCLONE_BASE_ERROR_H_
#define XCLONE_BASE_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace xclone {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad command-line or API usage.  CLI exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent data: files, configs, contract violations.
// CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

// Tensor dimension mismatch.
class ShapeError : public DataError {
 public:
  using DataError::DataError;
};

// NaN propagation, training divergence, other numeric failure.
// CLI exit code 4.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace xclone

#define XC_CHECK(cond, msg)                  \
  do {                                       \
    if (!(cond)) {                           \
      std::ostringstream os__;               \
      os__ << msg;                           \
      throw ::xclone::DataError(os__.str()); \
    }                                        \
  } while (0)

#define XC_SHAPE_CHECK(cond, msg)             \
  do {                                        \
    if (!(cond)) {                            \
      std::ostringstream os__;                \
      os__ << msg;                            \
      throw ::xclone::ShapeError(os__.str()); \
    }                                         \
  } while (0)

#define XC_NUM_CHECK(cond, msg)                   \
  do {                                            \
    if (!(cond)) {                                \
      std::ostringstream os__;                    \
      os__ << msg;                                \
      throw ::xclone::NumericalError(os__.str()); \
    }                                             \
  } while (0)

#endif  // XCLONE_BASE_ERROR_H_
