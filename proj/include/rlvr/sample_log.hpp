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

// Completion logs: one JSON object per line,
//
//   {"problem_id": "p1", "sample_index": 0, "completion": "...",
//    "reward": 1, "answer": "42", "token_logprobs": [-0.1, -2.3]}
//
// "answer" may be null or omitted (NA); "token_logprobs" is optional.
// Unknown fields are rejected.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rlvr/error.hpp"

namespace rlvr {

struct SampleRecord {
  std::string problem_id;
  std::uint64_t sample_index = 0;
  std::string completion;
  int reward = 0;
  std::optional<std::string> answer;  // nullopt is NA
  std::optional<std::vector<double>> token_logprobs;

  bool operator==(const SampleRecord&) const = default;
};

struct SampleLog {
  std::vector<SampleRecord> records;

  // Problem ids in order of first appearance.
  std::vector<std::string> problem_ids() const;
  // Records of one problem, in log order.
  std::vector<const SampleRecord*> records_for(const std::string& problem_id) const;
};

struct IngestIssue {
  std::size_t line;  // 1-based
  ErrorCode code;    // kParseError or kSchemaViolation
  std::string field; // empty for parse errors
  std::string message;
};

struct IngestResult {
  SampleLog log;
  std::vector<IngestIssue> issues;     // lenient mode: skipped lines
  std::vector<std::string> warnings;
};

// Parses one line. Throws LineError.
SampleRecord parse_record(std::string_view line, std::size_t line_number);

// Strict mode throws the first LineError; lenient mode skips malformed lines
// and reports them in `issues`. Duplicate (problem_id, sample_index) pairs
// are schema violations on "sample_index".
IngestResult ingest_stream(std::istream& in, bool strict);
IngestResult ingest(const std::filesystem::path& path, bool strict);

// Single JSON line without trailing newline, fields in schema order.
std::string emit_record(const SampleRecord& record);
void write_log(std::ostream& out, const SampleLog& log);

}  // namespace rlvr
