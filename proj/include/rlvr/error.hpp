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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rlvr {

// Every failure the library can signal. The numeric values are part of the
// C API (see rlvr.h) and must not be reordered.
enum class ErrorCode : int {
  kOk = 0,
  // dist-core
  kInvalidSpace = 1,
  kInvalidDistribution = 2,
  kInvalidReward = 3,
  kAllZeroWeights = 4,
  kNegativeWeight = 5,
  kNonFiniteWeight = 6,
  kSpaceMismatch = 7,
  kEpsilonOutOfRange = 8,
  // tilt-update
  kInvalidParams = 9,
  kNoCorrectMass = 10,
  kGammaOutOfRange = 11,
  kSpaceTooLarge = 12,
  kInfeasibleTarget = 13,
  // policy-train
  kEmptySupport = 14,
  kAbsoluteContinuityViolation = 15,
  // metrics
  kKExceedsN = 16,
  kEmptySequence = 17,
  kPositiveLogprob = 18,
  // genmodel
  kInvalidModel = 19,
  kEmptyBatch = 20,
  // support-analysis
  kProblemSetMismatch = 21,
  // harness
  kConfigInvalid = 22,
  kIoFailure = 23,
  kParseError = 24,
  kSchemaViolation = 25,
  kInvariantViolation = 26,
  kInvalidHandle = 27,
  kInternal = 28,
};

std::string_view error_code_name(ErrorCode code);

// Process exit status for a failure: 2 configuration, 3 input, 4 internal
// invariant violation. kOk maps to 0.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by ingest() for line-level failures; carries the 1-based line number
// and, for schema violations, the offending field.
class LineError : public Error {
 public:
  LineError(ErrorCode code, std::size_t line, std::string field,
            const std::string& message)
      : Error(code, message), line_(line), field_(std::move(field)) {}

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace rlvr
