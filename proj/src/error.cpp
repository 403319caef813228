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

#include "diophlab/error.hpp"

namespace diophlab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kPrecisionExhausted: return "precision_exhausted";
    case ErrorCode::kBudgetExceeded: return "budget_exceeded";
    case ErrorCode::kDegenerateTilt: return "degenerate_tilt";
    case ErrorCode::kRationalResonance: return "rational_resonance";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kDigestMismatch: return "digest_mismatch";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kSolverIncomplete: return "solver_incomplete";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace diophlab
