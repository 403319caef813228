// Copyright 2026 The diophlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIOPHLAB_ERROR_HPP_
#define DIOPHLAB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace diophlab {

// Numeric values are part of the C ABI (see diophlab.h); do not reorder.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kConfig = 2,
  kPrecisionExhausted = 3,
  kBudgetExceeded = 4,
  kDegenerateTilt = 5,
  kRationalResonance = 6,
  kDomain = 7,
  kNotFound = 8,
  kDigestMismatch = 9,
  kIo = 10,
  kSolverIncomplete = 11,
  kInternal = 12,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorCode::kInvalidArgument, what);
}

}  // namespace diophlab

#endif  // DIOPHLAB_ERROR_HPP_
