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

// Experiment orchestration. A config is a JSON document
//
//   {"kind": "tilt-sweep", "seed": 7, "out": "results", "strict": false,
//    "params": {"betas": [0, 1, 10, 50]}}
//
// where every top-level field is optional and "params" holds kind-specific
// overrides of the defaults. Unknown fields at either level are rejected.
// Relative paths inside "params" resolve against the config file directory.
//
// Each run writes one or more CSV tables plus summary.json into the output
// directory. Outputs depend only on the config and input file contents.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace rlvr {

enum class ExperimentKind {
  kTiltSweep,
  kTrain,
  kThm3Sweep,
  kEntropyProbe,
  kAnalyzeLogs,
  kPassKCurve,
};

inline constexpr std::string_view kOutputDirEnv = "RLVR_LAB_OUT";

std::string_view kind_name(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(std::string_view name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kTiltSweep;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;   // empty: $RLVR_LAB_OUT, else ./rlvr-out
  bool strict = false;             // abort on the first malformed log line
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::filesystem::path base_dir;  // for relative paths in params
};

ExperimentConfig default_config(ExperimentKind kind);

// Throws kConfigInvalid (malformed, unknown field, kind mismatch) or
// kIoFailure.
ExperimentConfig parse_config(ExperimentKind kind, std::string_view text,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(ExperimentKind kind, const std::filesystem::path& path);

// Overrides one parameter; the key must be known for the config's kind.
void set_param(ExperimentConfig& config, const std::string& key,
               const nlohmann::ordered_json& value);

// Defaults merged with overrides, in canonical key order.
nlohmann::ordered_json resolved_params(const ExperimentConfig& config);

std::filesystem::path resolve_out_dir(const ExperimentConfig& config);

struct RunResult {
  std::filesystem::path out_dir;
  std::vector<std::string> files;  // names relative to out_dir
  nlohmann::ordered_json summary;
};

// Runs the experiment and writes its outputs. Each file is written to a
// temporary name and renamed into place. Throws rlvr::Error; a failed
// invariant check (kInvariantViolation) is raised after outputs are written.
RunResult run(const ExperimentConfig& config);

}  // namespace rlvr
