// Copyright 2026 The Hedonic Authors
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

#ifndef HEDONIC_ERROR_HPP_
#define HEDONIC_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace hedonic {

enum class ErrorCode {
  kDimensionMismatch,
  kNegativeMass,
  kInvalidSurplus,
  kInfeasibleMass,
  kConstraintViolation,
  kDualInconsistency,
  kTooLarge,
  kNonIntegralMasses,
  kNotAProbability,
  kBoundarySupport,
  kDeadQuality,
  kMaxIterations,
  kParseError,
  kUsage,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

// Process exit status for a failure of the given kind: 2 parse/validation,
// 3 solver non-convergence, 4 identification precondition, 5 internal.
int ExitStatus(ErrorCode code);

class HedonicError : public std::runtime_error {
 public:
  HedonicError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hedonic

#endif  // HEDONIC_ERROR_HPP_
