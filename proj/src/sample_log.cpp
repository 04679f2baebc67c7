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

#include "rlvr/sample_log.hpp"

#include <fstream>
#include <set>
#include <unordered_set>
#include <utility>

#include "json.hpp"

namespace rlvr {

using nlohmann::json;

std::vector<std::string> SampleLog::problem_ids() const {
  std::vector<std::string> ids;
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (seen.insert(r.problem_id).second) ids.push_back(r.problem_id);
  }
  return ids;
}

std::vector<const SampleRecord*> SampleLog::records_for(
    const std::string& problem_id) const {
  std::vector<const SampleRecord*> out;
  for (const auto& r : records) {
    if (r.problem_id == problem_id) out.push_back(&r);
  }
  return out;
}

namespace {

[[noreturn]] void schema(std::size_t line, const std::string& field,
                         const std::string& what) {
  throw LineError(ErrorCode::kSchemaViolation, line, field,
                  "line " + std::to_string(line) + ": field '" + field + "' " + what);
}

const std::set<std::string>& known_fields() {
  static const std::set<std::string> fields = {
      "problem_id", "sample_index", "completion", "reward", "answer", "token_logprobs"};
  return fields;
}

}  // namespace

SampleRecord parse_record(std::string_view line, std::size_t line_number) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw LineError(ErrorCode::kParseError, line_number, "",
                    "line " + std::to_string(line_number) + ": " + e.what());
  }
  if (!j.is_object()) {
    throw LineError(ErrorCode::kParseError, line_number, "",
                    "line " + std::to_string(line_number) + ": expected a JSON object");
  }
  for (const auto& [key, _] : j.items()) {
    if (!known_fields().count(key)) schema(line_number, key, "is not part of the schema");
  }

  SampleRecord r;
  auto require = [&](const char* field) -> const json& {
    auto it = j.find(field);
    if (it == j.end()) schema(line_number, field, "is missing");
    return *it;
  };

  const json& pid = require("problem_id");
  if (!pid.is_string() || pid.get_ref<const std::string&>().empty()) {
    schema(line_number, "problem_id", "must be a non-empty string");
  }
  r.problem_id = pid.get<std::string>();

  const json& idx = require("sample_index");
  if (!idx.is_number_unsigned() && !(idx.is_number_integer() && idx.get<std::int64_t>() >= 0)) {
    schema(line_number, "sample_index", "must be a non-negative integer");
  }
  r.sample_index = idx.get<std::uint64_t>();

  const json& completion = require("completion");
  if (!completion.is_string()) schema(line_number, "completion", "must be a string");
  r.completion = completion.get<std::string>();

  const json& reward = require("reward");
  if (!reward.is_number_integer() ||
      (reward.get<std::int64_t>() != 0 && reward.get<std::int64_t>() != 1)) {
    schema(line_number, "reward", "must be 0 or 1");
  }
  r.reward = reward.get<int>();

  if (auto it = j.find("answer"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) schema(line_number, "answer", "must be a string or null");
    r.answer = it->get<std::string>();
  }

  if (auto it = j.find("token_logprobs"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) schema(line_number, "token_logprobs", "must be an array");
    std::vector<double> lps;
    lps.reserve(it->size());
    for (const auto& v : *it) {
      if (!v.is_number()) schema(line_number, "token_logprobs", "must contain numbers");
      const double lp = v.get<double>();
      if (!(lp <= 0.0)) schema(line_number, "token_logprobs", "entries must be <= 0");
      lps.push_back(lp);
    }
    r.token_logprobs = std::move(lps);
  }
  return r;
}

IngestResult ingest_stream(std::istream& in, bool strict) {
  IngestResult result;
  std::set<std::pair<std::string, std::uint64_t>> keys;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      SampleRecord r = parse_record(line, line_number);
      if (!keys.emplace(r.problem_id, r.sample_index).second) {
        schema(line_number, "sample_index",
               "duplicates (" + r.problem_id + ", " + std::to_string(r.sample_index) + ")");
      }
      result.log.records.push_back(std::move(r));
    } catch (const LineError& e) {
      if (strict) throw;
      result.issues.push_back({e.line(), e.code(), e.field(), e.what()});
    }
  }
  if (result.log.records.empty() && result.issues.empty()) {
    result.warnings.push_back("log contains no records");
  }
  if (!result.issues.empty()) {
    result.warnings.push_back("skipped " + std::to_string(result.issues.size()) +
                              " malformed line(s)");
  }
  return result;
}

IngestResult ingest(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoFailure, "cannot open log file " + path.string());
  return ingest_stream(in, strict);
}

std::string emit_record(const SampleRecord& record) {
  nlohmann::ordered_json j;
  j["problem_id"] = record.problem_id;
  j["sample_index"] = record.sample_index;
  j["completion"] = record.completion;
  j["reward"] = record.reward;
  j["answer"] = record.answer ? nlohmann::ordered_json(*record.answer)
                              : nlohmann::ordered_json(nullptr);
  if (record.token_logprobs) j["token_logprobs"] = *record.token_logprobs;
  return j.dump();
}

void write_log(std::ostream& out, const SampleLog& log) {
  for (const auto& r : log.records) out << emit_record(r) << '\n';
}

}  // namespace rlvr
