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

#include "hedonic/error.hpp"

namespace hedonic {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNegativeMass: return "NegativeMass";
    case ErrorCode::kInvalidSurplus: return "InvalidSurplus";
    case ErrorCode::kInfeasibleMass: return "InfeasibleMass";
    case ErrorCode::kConstraintViolation: return "ConstraintViolation";
    case ErrorCode::kDualInconsistency: return "DualInconsistency";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kNonIntegralMasses: return "NonIntegralMasses";
    case ErrorCode::kNotAProbability: return "NotAProbability";
    case ErrorCode::kBoundarySupport: return "BoundarySupport";
    case ErrorCode::kDeadQuality: return "DeadQuality";
    case ErrorCode::kMaxIterations: return "MaxIterations";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kUsage: return "UsageError";
    case ErrorCode::kInternal: return "InternalError";
  }
  return "Unknown";
}

int ExitStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kNegativeMass:
    case ErrorCode::kInvalidSurplus:
    case ErrorCode::kInfeasibleMass:
    case ErrorCode::kConstraintViolation:
    case ErrorCode::kNotAProbability:
    case ErrorCode::kParseError:
    case ErrorCode::kUsage:
    case ErrorCode::kDeadQuality:
    case ErrorCode::kTooLarge:
    case ErrorCode::kNonIntegralMasses:
      return 2;
    case ErrorCode::kMaxIterations:
      return 3;
    case ErrorCode::kBoundarySupport:
      return 4;
    case ErrorCode::kDualInconsistency:
    case ErrorCode::kInternal:
      return 5;
  }
  return 5;
}

}  // namespace hedonic
