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

// rlvr-lab: runs one experiment per invocation through the C API.
//
//   rlvr-lab tilt-sweep --seed 3 --out results --set 'betas=[0,2,4]'
//   rlvr-lab analyze-logs --base-log base.jsonl --rlvr-log rl.jsonl --budget-k 64
//
// Errors go to stderr as a single JSON object; the exit status is 2 for
// configuration errors, 3 for input errors and 4 for invariant violations.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rlvr/rlvr.h"

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool strict = false;
  std::vector<std::string> sets;
  std::string base_log;
  std::string rlvr_log;
  std::optional<std::uint64_t> budget_k;
  bool quiet = false;
};

int report_error(rlvr_status status, const std::string& message) {
  nlohmann::ordered_json err;
  err["error"] = rlvr_status_name(status);
  err["exit_code"] = rlvr_status_exit_code(status);
  err["message"] = message;
  std::cerr << err.dump() << "\n";
  return rlvr_status_exit_code(status);
}

int report_error(rlvr_status status) { return report_error(status, rlvr_last_error()); }

// Paths given on the command line are relative to the working directory,
// while paths in a config file are relative to that file.
std::string cli_path(const Options& opts, const std::string& p) {
  if (opts.config_path.empty()) return p;
  return std::filesystem::absolute(p).string();
}

int run_kind(const std::string& name, const Options& opts) {
  rlvr_experiment_kind kind;
  if (rlvr_status s = rlvr_kind_from_name(name.c_str(), &kind); s != RLVR_OK) {
    return report_error(s);
  }
  rlvr_config* config = nullptr;
  rlvr_status s = opts.config_path.empty()
                      ? rlvr_config_default(kind, &config)
                      : rlvr_config_from_file(kind, opts.config_path.c_str(), &config);
  if (s != RLVR_OK) return report_error(s);
  std::unique_ptr<rlvr_config, decltype(&rlvr_config_free)> guard(config, rlvr_config_free);

  auto set_json = [&](const std::string& key, const std::string& json) {
    return rlvr_config_set_param(config, key.c_str(), json.c_str());
  };
  for (const auto& kv : opts.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      return report_error(RLVR_CONFIG_INVALID, "--set expects key=value, got '" + kv + "'");
    }
    if ((s = set_json(kv.substr(0, eq), kv.substr(eq + 1))) != RLVR_OK) return report_error(s);
  }
  if (!opts.base_log.empty()) {
    s = set_json("base_log", nlohmann::json(cli_path(opts, opts.base_log)).dump());
    if (s != RLVR_OK) return report_error(s);
  }
  if (!opts.rlvr_log.empty()) {
    s = set_json("rlvr_log", nlohmann::json(cli_path(opts, opts.rlvr_log)).dump());
    if (s != RLVR_OK) return report_error(s);
  }
  if (opts.budget_k) {
    if ((s = set_json("budget_k", std::to_string(*opts.budget_k))) != RLVR_OK) {
      return report_error(s);
    }
  }
  if (opts.seed) rlvr_config_set_seed(config, *opts.seed);
  if (!opts.out_dir.empty()) rlvr_config_set_output_dir(config, opts.out_dir.c_str());
  if (opts.strict) rlvr_config_set_strict(config, 1);

  rlvr_report* report = nullptr;
  if ((s = rlvr_run(config, &report)) != RLVR_OK) return report_error(s);
  if (!opts.quiet) std::cout << rlvr_report_summary(report) << "\n";
  rlvr_report_free(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RLVR lab: support, tilting and entropy experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rlvr_version()));

  Options opts;
  const std::vector<std::pair<std::string, std::string>> kinds = {
      {"tilt-sweep", "Exponential tilt across a beta grid"},
      {"train", "Tabular policy-gradient training trace"},
      {"thm3-sweep", "Randomized check of the tail-mass bound"},
      {"entropy-probe", "Token vs answer entropy on toy generative models"},
      {"analyze-logs", "Support categories from base and RLVR sample logs"},
      {"passk-curve", "pass@k curves, exact and Monte Carlo"},
  };
  for (const auto& [name, help] : kinds) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "Master seed");
    sub->add_option("--out", opts.out_dir, "Output directory (default $RLVR_LAB_OUT or ./rlvr-out)");
    sub->add_flag("--strict", opts.strict, "Abort on the first malformed log line");
    sub->add_option("--set", opts.sets, "Parameter override key=json (repeatable)");
    sub->add_flag("-q,--quiet", opts.quiet, "Do not print the summary");
    if (name == "analyze-logs") {
      sub->add_option("--base-log", opts.base_log, "Base model JSONL log");
      sub->add_option("--rlvr-log", opts.rlvr_log, "RLVR model JSONL log");
      sub->add_option("--budget-k", opts.budget_k, "Samples per problem to use");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(RLVR_CONFIG_INVALID, e.what());
  }
  return run_kind(app.get_subcommands().front()->get_name(), opts);
}
