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

#include "rlvr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "format.hpp"
#include "rlvr/distribution.hpp"
#include "rlvr/error.hpp"
#include "rlvr/genmodel.hpp"
#include "rlvr/metrics.hpp"
#include "rlvr/policy.hpp"
#include "rlvr/sample_log.hpp"
#include "rlvr/seed.hpp"
#include "rlvr/support_analysis.hpp"
#include "rlvr/tilt.hpp"

namespace rlvr {

using Json = nlohmann::ordered_json;

namespace {

struct KindInfo {
  ExperimentKind kind;
  std::string_view name;
};

constexpr KindInfo kKinds[] = {
    {ExperimentKind::kTiltSweep, "tilt-sweep"},
    {ExperimentKind::kTrain, "train"},
    {ExperimentKind::kThm3Sweep, "thm3-sweep"},
    {ExperimentKind::kEntropyProbe, "entropy-probe"},
    {ExperimentKind::kAnalyzeLogs, "analyze-logs"},
    {ExperimentKind::kPassKCurve, "passk-curve"},
};

// Defaults per kind, in canonical order. null marks a required parameter
// (or, for "outcomes", "mask" and "log", an optional one).
Json defaults_for(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kTiltSweep:
      return {{"q", {0.5, 0.3, 0.2}},
              {"rewards", {0, 1, 1}},
              {"outcomes", nullptr},
              {"betas", {0, 1, 10, 50}}};
    case ExperimentKind::kTrain:
      return {{"q", {0.5, 0.3, 0.2, 0.0}},
              {"rewards", {0, 1, 1, 1}},
              {"outcomes", nullptr},
              {"mask", nullptr},
              {"beta", 1.0},
              {"learning_rate", 0.1},
              {"group_size", 8},
              {"steps", 200},
              {"baseline", "group_mean"},
              {"prompt_filter", "off"},
              {"mode", "reinforce"},
              {"gradient_tolerance", 0.0}};
    case ExperimentKind::kThm3Sweep:
      return {{"instances", 10000},
              {"min_outcomes", 2},
              {"max_outcomes", 8},
              {"max_beta", 3.0},
              {"max_policy_beta", 0.5},
              {"max_delta", 0.1}};
    case ExperimentKind::kEntropyProbe:
      return {{"chain_length", 4},
              {"branching", 2},
              {"base_answers", 2},
              {"samples", 1000},
              {"gap_q", {0.9, 0.05, 0.05}},
              {"gap_rewards", {0, 1, 1}},
              {"gap_betas", {0, 1, 5, 50}}};
    case ExperimentKind::kAnalyzeLogs:
      return {{"base_log", nullptr},
              {"rlvr_log", nullptr},
              {"budget_k", nullptr},
              {"zeta", 0.05}};
    case ExperimentKind::kPassKCurve:
      return {{"q", {0.7, 0.2, 0.1}},
              {"rewards", {0, 1, 1}},
              {"beta", 1.0},
              {"k_values", {1, 4, 16, 64}},
              {"mc_trials", 2000},
              {"log", nullptr}};
  }
  return Json::object();
}

[[noreturn]] void config_error(const std::string& message) {
  fail(ErrorCode::kConfigInvalid, message);
}

const Json& param(const Json& params, const char* key) {
  auto it = params.find(key);
  if (it == params.end() || it->is_null()) {
    config_error(std::string("missing required parameter '") + key + "'");
  }
  return *it;
}

double get_double(const Json& params, const char* key) {
  const Json& v = param(params, key);
  if (!v.is_number()) config_error(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const Json& params, const char* key) {
  const Json& v = param(params, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    config_error(std::string("parameter '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const Json& params, const char* key) {
  const Json& v = param(params, key);
  if (!v.is_string()) config_error(std::string("parameter '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> get_doubles(const Json& params, const char* key) {
  const Json& v = param(params, key);
  if (!v.is_array()) config_error(std::string("parameter '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) config_error(std::string("parameter '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::uint64_t> get_counts(const Json& params, const char* key) {
  const Json& v = param(params, key);
  if (!v.is_array()) config_error(std::string("parameter '") + key + "' must be an array");
  std::vector<std::uint64_t> out;
  for (const auto& x : v) {
    if (!x.is_number_integer() || x.get<std::int64_t>() < 0) {
      config_error(std::string("parameter '") + key + "' must hold non-negative integers");
    }
    out.push_back(x.get<std::uint64_t>());
  }
  return out;
}

std::vector<int> get_rewards(const Json& params, const char* key) {
  std::vector<int> out;
  for (std::uint64_t r : get_counts(params, key)) out.push_back(static_cast<int>(r));
  return out;
}

// A beta is a non-negative number or the string "inf".
double get_beta(const Json& params, const char* key) {
  const Json& v = param(params, key);
  if (v.is_string() && v.get<std::string>() == "inf") return kKlFree;
  if (!v.is_number()) config_error(std::string("parameter '") + key + "' must be a number or \"inf\"");
  return v.get<double>();
}

SpacePtr space_from(const Json& params, std::size_t size) {
  auto it = params.find("outcomes");
  if (it == params.end() || it->is_null()) return OutcomeSpace::indexed(size);
  if (!it->is_array()) config_error("parameter 'outcomes' must be an array of strings");
  std::vector<std::string> ids;
  for (const auto& x : *it) {
    if (!x.is_string()) config_error("parameter 'outcomes' must be an array of strings");
    ids.push_back(x.get<std::string>());
  }
  return std::make_shared<const OutcomeSpace>("x", std::move(ids));
}

std::filesystem::path resolve_path(const ExperimentConfig& config, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !config.base_dir.empty()) return config.base_dir / path;
  return path;
}

// Collects output files and renames each into place once fully written.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) fail(ErrorCode::kIoFailure, "cannot create output directory " + dir_.string());
  }

  void write(const std::string& name, const std::string& content) {
    const auto final_path = dir_ / name;
    auto tmp = final_path;
    tmp += ".partial";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) fail(ErrorCode::kIoFailure, "cannot write " + tmp.string());
      out << content;
      out.flush();
      if (!out) fail(ErrorCode::kIoFailure, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) fail(ErrorCode::kIoFailure, "cannot rename into " + final_path.string());
    files_.push_back(name);
  }

  const std::filesystem::path& path() const { return dir_; }
  const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

struct Outcome {
  Json metrics = Json::object();
  std::string invariant_failure;  // non-empty: raise after writing
};

// ---------------------------------------------------------------------------

Outcome run_tilt_sweep(const Json& p, OutputDir& out) {
  const auto qv = get_doubles(p, "q");
  const auto space = space_from(p, qv.size());
  const FiniteDistribution q(space, qv);
  const RewardTable rewards(space, get_rewards(p, "rewards"));
  const auto betas = get_doubles(p, "betas");
  const bool has_limit = correct_mass(q, rewards) > 0.0;
  const auto limit = has_limit ? std::optional(kl_free_limit(q, rewards)) : std::nullopt;

  CsvTable table({"beta", "expected_reward", "entropy", "kl_to_base",
                  "max_abs_diff_kl_free"});
  for (const auto& id : space->outcomes()) table.add_column("p_" + id);

  Outcome o;
  double prev_reward = -1.0;
  double prev_beta = -1.0;
  bool monotone = true;
  for (double beta : betas) {
    if (!(beta >= 0.0)) config_error("betas must be non-negative");
    const auto tilted = exponential_tilt(q, rewards, beta);
    const double reward = correct_mass(tilted, rewards);
    double diff = std::nan("");
    if (limit) {
      diff = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) {
        diff = std::max(diff, std::abs(tilted[i] - (*limit)[i]));
      }
    }
    if (beta >= prev_beta && reward < prev_reward - 1e-12) monotone = false;
    prev_beta = beta;
    prev_reward = reward;
    auto& row = table.row();
    row.add(beta).add(reward).add(entropy(tilted)).add(kl(tilted, q)).add(diff);
    for (double x : tilted.probs()) row.add(x);
  }
  out.write("tilt_sweep.csv", table.str());
  o.metrics["rows"] = betas.size();
  o.metrics["expected_reward_nondecreasing"] = monotone;
  if (!monotone) o.invariant_failure = "expected reward decreased along the beta grid";
  return o;
}

Outcome run_train(const Json& p, std::uint64_t seed, OutputDir& out) {
  const auto qv = get_doubles(p, "q");
  const auto space = space_from(p, qv.size());
  const FiniteDistribution q(space, qv);
  const RewardTable rewards(space, get_rewards(p, "rewards"));

  TrainConfig cfg;
  cfg.beta = get_beta(p, "beta");
  cfg.learning_rate = get_double(p, "learning_rate");
  cfg.group_size = get_count(p, "group_size");
  cfg.steps = get_count(p, "steps");
  cfg.gradient_tolerance = get_double(p, "gradient_tolerance");
  cfg.seed = seed;
  const auto baseline = get_string(p, "baseline");
  if (baseline == "none") {
    cfg.baseline = Baseline::kNone;
  } else if (baseline == "group_mean") {
    cfg.baseline = Baseline::kGroupMean;
  } else {
    config_error("baseline must be 'none' or 'group_mean'");
  }
  const auto filter = get_string(p, "prompt_filter");
  if (filter == "off") {
    cfg.prompt_filter = PromptFilter::kOff;
  } else if (filter == "drop_all_wrong") {
    cfg.prompt_filter = PromptFilter::kDropAllWrong;
  } else if (filter == "drop_all_wrong_and_all_right") {
    cfg.prompt_filter = PromptFilter::kDropAllWrongAndAllRight;
  } else {
    config_error("prompt_filter must be off, drop_all_wrong or drop_all_wrong_and_all_right");
  }
  const auto mode = get_string(p, "mode");
  if (mode == "reinforce") {
    cfg.mode = GradientMode::kReinforce;
  } else if (mode == "exact") {
    cfg.mode = GradientMode::kExact;
  } else {
    config_error("mode must be 'reinforce' or 'exact'");
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }

  TabularPolicy policy0 = TabularPolicy::from_distribution(q);
  if (auto it = p.find("mask"); it != p.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != q.size()) {
      config_error("parameter 'mask' must be a boolean array matching q");
    }
    std::vector<double> logits(q.size(), 0.0);
    std::vector<bool> mask(q.size(), false);
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (!(*it)[i].is_boolean()) config_error("parameter 'mask' must hold booleans");
      mask[i] = (*it)[i].get<bool>();
      if (mask[i] && q[i] > 0.0) logits[i] = std::log(q[i]);
    }
    policy0 = TabularPolicy(space, std::move(logits), std::move(mask));
  }

  const TrainTrace trace = train(policy0, q, rewards, cfg);

  CsvTable table({"step", "expected_reward", "kl_to_base", "entropy", "gradient_norm",
                  "group_accuracy", "skipped"});
  for (const auto& id : space->outcomes()) table.add_column("p_" + id);
  double masked_max = 0.0;
  for (const auto& rec : trace.records) {
    auto& row = table.row();
    row.add(rec.step).add(rec.expected_reward).add(rec.kl_to_base).add(rec.entropy)
        .add(rec.gradient_norm).add(rec.group_accuracy).add(rec.skipped);
    for (std::size_t i = 0; i < rec.probs.size(); ++i) {
      row.add(rec.probs[i]);
      if (!policy0.support_mask()[i]) masked_max = std::max(masked_max, rec.probs[i]);
    }
  }
  out.write("train_trace.csv", table.str());

  Outcome o;
  const auto final_pi = materialize(trace.final_policy);
  o.metrics["steps_completed"] = trace.records.size();
  o.metrics["final_probs"] = std::vector<double>(final_pi.probs().begin(), final_pi.probs().end());
  o.metrics["final_expected_reward"] = correct_mass(final_pi, rewards);
  o.metrics["masked_outcome_max_probability"] = masked_max;
  if (cfg.beta != kKlFree) {
    const auto target = exponential_tilt(q, rewards, cfg.beta);
    o.metrics["tv_to_tilt"] = total_variation(final_pi, target);
  } else if (correct_mass(q, rewards) > 0.0) {
    o.metrics["tv_to_kl_free_limit"] = total_variation(final_pi, kl_free_limit(q, rewards));
  }
  if (masked_max != 0.0) o.invariant_failure = "masked outcome acquired probability mass";
  return o;
}

Outcome run_thm3(const Json& p, std::uint64_t seed, OutputDir& out) {
  TailBoundSweepOptions opts;
  opts.instances = get_count(p, "instances");
  opts.min_outcomes = get_count(p, "min_outcomes");
  opts.max_outcomes = get_count(p, "max_outcomes");
  opts.max_beta = get_double(p, "max_beta");
  opts.max_policy_beta = get_double(p, "max_policy_beta");
  opts.max_delta = get_double(p, "max_delta");
  if (opts.min_outcomes < 1 || opts.max_outcomes < opts.min_outcomes) {
    config_error("need 1 <= min_outcomes <= max_outcomes");
  }
  if (!(opts.max_beta >= 0.0) || !(opts.max_policy_beta >= 0.0) || !(opts.max_delta > 0.0)) {
    config_error("max_beta and max_policy_beta must be >= 0, max_delta > 0");
  }

  const auto sweep = run_tail_bound_sweep(seed, opts);
  CsvTable table({"index", "outcomes", "gamma", "beta", "tau", "delta", "kl_policy_base",
                  "tail_size", "max_tail_mass", "bound", "violated", "rejected"});
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < sweep.instances.size(); ++i) {
    const auto& inst = sweep.instances[i];
    table.row().add(i).add(inst.outcomes).add(inst.params.gamma).add(inst.params.beta)
        .add(inst.params.tau).add(inst.params.delta).add(inst.kl_policy_base)
        .add(inst.tail_size).add(inst.max_tail_mass).add(inst.bound).add(inst.violated)
        .add(inst.rejected);
    worst_ratio = std::max(worst_ratio, inst.max_tail_mass / inst.bound);
  }
  out.write("thm3_sweep.csv", table.str());
  Outcome o;
  o.metrics["instances"] = sweep.instances.size();
  o.metrics["violations"] = sweep.violations;
  o.metrics["rejected_draws"] = sweep.rejected;
  o.metrics["max_tail_mass_to_bound"] = worst_ratio;
  if (sweep.violations > 0) o.invariant_failure = "tail-mass bound violated";
  return o;
}

Outcome run_entropy_probe(const Json& p, std::uint64_t seed, OutputDir& out) {
  const auto chain = get_count(p, "chain_length");
  const auto branching = get_count(p, "branching");
  const auto answers = get_count(p, "base_answers");
  const auto samples = get_count(p, "samples");
  if (chain < 2 || branching < 1 || answers < 1 || samples < 1) {
    config_error("need chain_length >= 2, branching >= 1, base_answers >= 1, samples >= 1");
  }
  const auto pair = build_decoupling_pair(chain, branching, answers);
  const auto base_cf = chain_closed_form(1, 1, answers);
  const auto rlvr_cf = chain_closed_form(chain, branching, 1);

  CsvTable models({"model", "samples", "token_entropy", "answer_entropy",
                   "expected_token_entropy", "expected_answer_entropy", "distinct_answers"});
  double tok[2];
  double ans[2];
  const ToyGenerativeModel* which[2] = {&pair.base, &pair.rlvr_like};
  const ChainEntropies* cf[2] = {&base_cf, &rlvr_cf};
  const char* names[2] = {"base", "rlvr_like"};
  for (int m = 0; m < 2; ++m) {
    const auto batch = generate(*which[m], derive_seed(seed, "entropy-probe", m), samples);
    const auto labels = batch.answers();
    tok[m] = token_entropy(batch);
    ans[m] = answer_entropy(labels);
    std::vector<std::string> distinct(labels);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    models.row().add(names[m]).add(samples).add(tok[m]).add(ans[m])
        .add(cf[m]->token_entropy).add(cf[m]->answer_entropy).add(distinct.size());
  }
  out.write("entropy_models.csv", models.str());

  const auto qv = get_doubles(p, "gap_q");
  const auto space = OutcomeSpace::indexed(qv.size());
  const FiniteDistribution q(space, qv);
  const RewardTable rewards(space, get_rewards(p, "gap_rewards"));
  CsvTable gaps({"beta", "h_base", "h_tilt", "gap", "kl_tilt_base"});
  for (double beta : get_doubles(p, "gap_betas")) {
    const auto g = entropy_gap(q, rewards, beta);
    gaps.row().add(beta).add(g.h_base).add(g.h_tilt).add(g.gap).add(g.kl_tilt_base);
  }
  out.write("entropy_gap.csv", gaps.str());

  Outcome o;
  o.metrics["delta_token_entropy"] = tok[1] - tok[0];
  o.metrics["delta_answer_entropy"] = ans[1] - ans[0];
  return o;
}

struct ProblemExtras {
  double answer_entropy = std::nan("");
  double perplexity = std::nan("");
};

// Answer entropy and mean perplexity over the first k records of a problem.
ProblemExtras extras_for(const SampleLog& log, const std::string& id, std::uint64_t k) {
  ProblemExtras e;
  auto records = log.records_for(id);
  if (records.size() > k) records.resize(k);
  std::vector<std::string> answers;
  std::vector<std::vector<double>> logprobs;
  for (const auto* r : records) {
    answers.push_back(r->answer.value_or(kNaLabel));
    if (r->token_logprobs && !r->token_logprobs->empty()) logprobs.push_back(*r->token_logprobs);
  }
  if (!answers.empty()) e.answer_entropy = answer_entropy(answers);
  if (!logprobs.empty()) e.perplexity = corpus_perplexity(logprobs);
  return e;
}

double nan_mean(const std::vector<double>& xs) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double x : xs) {
    if (std::isnan(x)) continue;
    sum += x;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : std::nan("");
}

Outcome run_analyze_logs(const Json& p, const ExperimentConfig& config, OutputDir& out) {
  const auto base_path = resolve_path(config, get_string(p, "base_log"));
  const auto rlvr_path = resolve_path(config, get_string(p, "rlvr_log"));
  const auto k = get_count(p, "budget_k");
  const double zeta = get_double(p, "zeta");
  if (k < 1) config_error("budget_k must be at least 1");
  if (!(zeta > 0.0 && zeta < 1.0)) config_error("zeta must lie in (0, 1)");

  const auto base = ingest(base_path, config.strict);
  const auto rlvr = ingest(rlvr_path, config.strict);
  const auto report = support_report_from_logs(base.log, rlvr.log, k, zeta);

  CsvTable table({"problem_id", "category", "base_solved", "rlvr_solved", "base_records",
                  "rlvr_records", "insufficient", "base_answer_entropy",
                  "rlvr_answer_entropy", "base_perplexity", "rlvr_perplexity"});
  std::vector<double> cols[4];
  for (const auto& item : report.items) {
    const auto b = extras_for(base.log, item.id, k);
    const auto r = extras_for(rlvr.log, item.id, k);
    cols[0].push_back(b.answer_entropy);
    cols[1].push_back(r.answer_entropy);
    cols[2].push_back(b.perplexity);
    cols[3].push_back(r.perplexity);
    table.row().add(item.id).add(std::string(category_name(item.category)))
        .add(item.base_reached).add(item.rlvr_reached).add(item.base_records)
        .add(item.rlvr_records).add(item.insufficient).add(b.answer_entropy)
        .add(r.answer_entropy).add(b.perplexity).add(r.perplexity);
  }
  out.write("support_report.csv", table.str());

  Outcome o;
  Json counts = Json::object();
  for (auto c : kAllCategories) counts[std::string(category_name(c))] = report.count(c);
  o.metrics["problems"] = report.total();
  o.metrics["counts"] = counts;
  o.metrics["base_accuracy"] = report.base_accuracy;
  o.metrics["rlvr_accuracy"] = report.rlvr_accuracy;
  o.metrics["budget_k"] = k;
  o.metrics["zeta"] = zeta;
  o.metrics["epsilon"] = *report.epsilon;
  o.metrics["insufficient"] = report.insufficient;
  o.metrics["mean_base_answer_entropy"] = nan_mean(cols[0]);
  o.metrics["mean_rlvr_answer_entropy"] = nan_mean(cols[1]);
  o.metrics["mean_base_perplexity"] = nan_mean(cols[2]);
  o.metrics["mean_rlvr_perplexity"] = nan_mean(cols[3]);
  o.metrics["base_skipped_lines"] = base.issues.size();
  o.metrics["rlvr_skipped_lines"] = rlvr.issues.size();
  std::vector<std::string> warnings;
  for (const auto& w : base.warnings) warnings.push_back("base: " + w);
  for (const auto& w : rlvr.warnings) warnings.push_back("rlvr: " + w);
  o.metrics["warnings"] = warnings;
  return o;
}

Outcome run_passk(const Json& p, const ExperimentConfig& config, OutputDir& out) {
  const auto qv = get_doubles(p, "q");
  const auto space = OutcomeSpace::indexed(qv.size());
  const FiniteDistribution q(space, qv);
  const RewardTable rewards(space, get_rewards(p, "rewards"));
  const double beta = get_beta(p, "beta");
  const auto ks = get_counts(p, "k_values");
  const auto trials = get_count(p, "mc_trials");
  if (ks.empty() || ks.front() < 1 || !std::is_sorted(ks.begin(), ks.end())) {
    config_error("k_values must be ascending positive integers");
  }
  const FiniteDistribution tilted =
      beta == kKlFree ? kl_free_limit(q, rewards) : exponential_tilt(q, rewards, beta);

  CsvTable table({"source", "model", "k", "value", "stderr"});
  Outcome o;
  double worst_z = 0.0;
  const FiniteDistribution* models[2] = {&q, &tilted};
  const char* names[2] = {"base", "tilted"};
  for (int m = 0; m < 2; ++m) {
    const double pc = correct_mass(*models[m], rewards);
    o.metrics[std::string("p_correct_") + names[m]] = pc;
    const auto curve = pass_at_k_curve_exact(pc, ks);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      table.row().add("exact").add(names[m]).add(ks[i]).add(curve.values[i]).add(0.0);
    }
    if (trials == 0) continue;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      Rng rng(derive_seed(config.seed, std::string("passk/") + names[m], i));
      std::uint64_t hits = 0;
      for (std::uint64_t t = 0; t < trials; ++t) {
        for (std::uint64_t d = 0; d < ks[i]; ++d) {
          if (rewards.correct(sample_one(models[m]->probs(), rng))) {
            ++hits;
            break;
          }
        }
      }
      const double v = static_cast<double>(hits) / static_cast<double>(trials);
      const double exact = curve.values[i];
      const double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(trials));
      if (sigma > 0.0) worst_z = std::max(worst_z, std::abs(v - exact) / sigma);
      table.row().add("monte_carlo").add(names[m]).add(ks[i]).add(v)
          .add(std::sqrt(v * (1.0 - v) / static_cast<double>(trials)));
    }
  }
  if (auto it = p.find("log"); it != p.end() && !it->is_null()) {
    const auto log = ingest(resolve_path(config, get_string(p, "log")), config.strict);
    const auto ids = log.log.problem_ids();
    if (ids.empty()) fail(ErrorCode::kEmptySequence, "pass@k log has no records");
    for (auto k : ks) {
      double sum = 0.0;
      for (const auto& id : ids) {
        const auto recs = log.log.records_for(id);
        std::uint64_t c = 0;
        for (const auto* r : recs) c += r->reward;
        sum += pass_at_k_estimate(recs.size(), c, k);
      }
      table.row().add("estimated").add("log").add(k)
          .add(sum / static_cast<double>(ids.size())).add(std::nan(""));
    }
    o.metrics["log_problems"] = ids.size();
  }
  out.write("passk_curve.csv", table.str());
  o.metrics["max_mc_z_score"] = worst_z;
  return o;
}

}  // namespace

std::string_view kind_name(ExperimentKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  return c;
}

ExperimentConfig parse_config(ExperimentKind kind, std::string_view text,
                              const std::filesystem::path& base_dir) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  ExperimentConfig c = default_config(kind);
  c.base_dir = base_dir;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") {
      if (!value.is_string() || parse_kind(value.get<std::string>()) != kind) {
        config_error("config kind does not match subcommand '" +
                     std::string(kind_name(kind)) + "'");
      }
    } else if (key == "seed") {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
        config_error("seed must be a non-negative integer");
      }
      c.seed = value.get<std::uint64_t>();
    } else if (key == "out") {
      if (!value.is_string()) config_error("out must be a string");
      c.out_dir = value.get<std::string>();
    } else if (key == "strict") {
      if (!value.is_boolean()) config_error("strict must be a boolean");
      c.strict = value.get<bool>();
    } else if (key == "params") {
      if (!value.is_object()) config_error("params must be an object");
      for (const auto& [pk, pv] : value.items()) set_param(c, pk, pv);
    } else {
      config_error("unknown config field '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig load_config(ExperimentKind kind, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoFailure, "cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(kind, ss.str(), path.parent_path());
}

void set_param(ExperimentConfig& config, const std::string& key, const Json& value) {
  const Json defaults = defaults_for(config.kind);
  if (!defaults.contains(key)) {
    config_error("unknown parameter '" + key + "' for " + std::string(kind_name(config.kind)));
  }
  config.params[key] = value;
}

Json resolved_params(const ExperimentConfig& config) {
  Json out = defaults_for(config.kind);
  for (const auto& [key, value] : config.params.items()) {
    if (!out.contains(key)) config_error("unknown parameter '" + key + "'");
    out[key] = value;
  }
  return out;
}

std::filesystem::path resolve_out_dir(const ExperimentConfig& config) {
  if (!config.out_dir.empty()) return config.out_dir;
  if (const char* env = std::getenv(std::string(kOutputDirEnv).c_str()); env && *env) {
    return env;
  }
  return "rlvr-out";
}

RunResult run(const ExperimentConfig& config) {
  const Json params = resolved_params(config);
  OutputDir out(resolve_out_dir(config));
  Outcome outcome;
  try {
    switch (config.kind) {
      case ExperimentKind::kTiltSweep: outcome = run_tilt_sweep(params, out); break;
      case ExperimentKind::kTrain: outcome = run_train(params, config.seed, out); break;
      case ExperimentKind::kThm3Sweep: outcome = run_thm3(params, config.seed, out); break;
      case ExperimentKind::kEntropyProbe:
        outcome = run_entropy_probe(params, config.seed, out);
        break;
      case ExperimentKind::kAnalyzeLogs:
        outcome = run_analyze_logs(params, config, out);
        break;
      case ExperimentKind::kPassKCurve: outcome = run_passk(params, config, out); break;
    }
  } catch (const LineError&) {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), std::string(kind_name(config.kind)) + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("malformed parameter: ") + e.what());
  }

  Json summary;
  summary["kind"] = std::string(kind_name(config.kind));
  summary["seed"] = config.seed;
  summary["strict"] = config.strict;
  summary["params"] = params;
  summary["outputs"] = out.files();
  summary["metrics"] = outcome.metrics;
  summary["status"] = outcome.invariant_failure.empty() ? "ok" : "invariant_violation";
  out.write("summary.json", summary.dump(2) + "\n");

  if (!outcome.invariant_failure.empty()) {
    fail(ErrorCode::kInvariantViolation,
         std::string(kind_name(config.kind)) + ": " + outcome.invariant_failure);
  }
  RunResult result;
  result.out_dir = out.path();
  result.files = out.files();
  result.summary = std::move(summary);
  return result;
}

}  // namespace rlvr
