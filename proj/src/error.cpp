// Copyright 2026 The RLVR Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rlvr/error.hpp"

namespace rlvr {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidSpace: return "InvalidSpace";
    case ErrorCode::kInvalidDistribution: return "InvalidDistribution";
    case ErrorCode::kInvalidReward: return "InvalidReward";
    case ErrorCode::kAllZeroWeights: return "AllZeroWeights";
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kNonFiniteWeight: return "NonFiniteWeight";
    case ErrorCode::kSpaceMismatch: return "SpaceMismatch";
    case ErrorCode::kEpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kNoCorrectMass: return "NoCorrectMass";
    case ErrorCode::kGammaOutOfRange: return "GammaOutOfRange";
    case ErrorCode::kSpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::kInfeasibleTarget: return "InfeasibleTarget";
    case ErrorCode::kEmptySupport: return "EmptySupport";
    case ErrorCode::kAbsoluteContinuityViolation:
      return "AbsoluteContinuityViolation";
    case ErrorCode::kKExceedsN: return "KExceedsN";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kPositiveLogprob: return "PositiveLogprob";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kProblemSetMismatch: return "ProblemSetMismatch";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kInvalidHandle: return "InvalidHandle";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk:
      return 0;
    case ErrorCode::kIoFailure:
    case ErrorCode::kParseError:
    case ErrorCode::kSchemaViolation:
    case ErrorCode::kProblemSetMismatch:
    case ErrorCode::kEmptySequence:
    case ErrorCode::kEmptyBatch:
      return 3;
    case ErrorCode::kInvariantViolation:
    case ErrorCode::kInternal:
    case ErrorCode::kInvalidHandle:
      return 4;
    default:
      return 2;
  }
}

}  // namespace rlvr
