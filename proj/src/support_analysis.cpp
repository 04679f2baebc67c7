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

#include "rlvr/support_analysis.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "rlvr/error.hpp"
#include "rlvr/metrics.hpp"

namespace rlvr {

std::string_view category_name(SupportCategory category) {
  switch (category) {
    case SupportCategory::kPreservation: return "Preservation";
    case SupportCategory::kShrinkage: return "Shrinkage";
    case SupportCategory::kExpansion: return "Expansion";
    case SupportCategory::kOutOfSupport: return "OutOfSupport";
  }
  return "Unknown";
}

SupportCategory categorize_problem(bool base_solved, bool rlvr_solved) {
  if (base_solved) {
    return rlvr_solved ? SupportCategory::kPreservation : SupportCategory::kShrinkage;
  }
  return rlvr_solved ? SupportCategory::kExpansion : SupportCategory::kOutOfSupport;
}

SupportCategory categorize_completion(double q_prob, double pi_prob, double epsilon) {
  if (!(q_prob >= 0.0 && q_prob <= 1.0) || !(pi_prob >= 0.0 && pi_prob <= 1.0)) {
    fail(ErrorCode::kInvalidParams, "probabilities must lie in [0, 1]");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    fail(ErrorCode::kEpsilonOutOfRange, "epsilon must lie in (0, 1)");
  }
  return categorize_problem(q_prob > epsilon, pi_prob > epsilon);
}

SupportReport assemble_report(std::vector<SupportItem> items) {
  SupportReport report;
  for (const auto& item : items) {
    ++report.counts[static_cast<int>(item.category)];
    if (item.insufficient) report.insufficient.push_back(item.id);
  }
  report.items = std::move(items);
  if (const auto n = report.total(); n > 0) {
    const double total = static_cast<double>(n);
    report.base_accuracy =
        static_cast<double>(report.count(SupportCategory::kPreservation) +
                            report.count(SupportCategory::kShrinkage)) / total;
    report.rlvr_accuracy =
        static_cast<double>(report.count(SupportCategory::kPreservation) +
                            report.count(SupportCategory::kExpansion)) / total;
  }
  return report;
}

namespace {

struct BudgetOutcome {
  bool solved = false;
  std::size_t records = 0;
};

std::unordered_map<std::string, BudgetOutcome> solved_within_budget(
    const SampleLog& log, std::uint64_t budget_k) {
  std::unordered_map<std::string, BudgetOutcome> out;
  for (const auto& r : log.records) {
    auto& o = out[r.problem_id];
    if (o.records >= budget_k) continue;
    ++o.records;
    o.solved = o.solved || r.reward == 1;
  }
  return out;
}

}  // namespace

SupportReport support_report_from_logs(const SampleLog& base_log,
                                       const SampleLog& rlvr_log,
                                       std::uint64_t budget_k, double zeta) {
  if (budget_k == 0) fail(ErrorCode::kInvalidParams, "budget_k must be at least 1");
  const auto base_ids = base_log.problem_ids();
  const auto rlvr_ids = rlvr_log.problem_ids();
  const std::set<std::string> base_set(base_ids.begin(), base_ids.end());
  const std::set<std::string> rlvr_set(rlvr_ids.begin(), rlvr_ids.end());
  if (base_set != rlvr_set) {
    std::vector<std::string> diff;
    std::set_symmetric_difference(base_set.begin(), base_set.end(), rlvr_set.begin(),
                                  rlvr_set.end(), std::back_inserter(diff));
    fail(ErrorCode::kProblemSetMismatch,
         "logs cover different problems (e.g. '" + diff.front() + "')");
  }

  const auto base = solved_within_budget(base_log, budget_k);
  const auto rlvr = solved_within_budget(rlvr_log, budget_k);
  std::vector<SupportItem> items;
  items.reserve(base_ids.size());
  for (const auto& id : base_ids) {
    const auto& b = base.at(id);
    const auto& r = rlvr.at(id);
    SupportItem item{id, categorize_problem(b.solved, r.solved), b.solved, r.solved,
                     b.records, r.records, b.records < budget_k || r.records < budget_k};
    items.push_back(std::move(item));
  }
  SupportReport report = assemble_report(std::move(items));
  report.budget_k = budget_k;
  report.zeta = zeta;
  report.epsilon = epsilon_threshold(zeta, budget_k);
  return report;
}

SupportReport support_report_from_distributions(const FiniteDistribution& q,
                                                const FiniteDistribution& pi,
                                                const RewardTable& rewards,
                                                double epsilon) {
  require_same_space(q.space(), pi.space());
  require_same_space(q.space(), rewards.space());
  std::vector<SupportItem> items;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!rewards.correct(i)) continue;
    const auto category = categorize_completion(q[i], pi[i], epsilon);
    items.push_back({q.space()->outcome(i), category, q[i] > epsilon, pi[i] > epsilon});
  }
  SupportReport report = assemble_report(std::move(items));
  report.epsilon = epsilon;
  return report;
}

SupportShift shrinkage_expansion_sets(const FiniteDistribution& q,
                                      const FiniteDistribution& pi,
                                      const RewardTable& rewards, double epsilon) {
  require_same_space(q.space(), pi.space());
  const SupportSet base = empirical_support(q, rewards, epsilon);
  const SupportSet trained = empirical_support(pi, rewards, epsilon);
  return {trained.minus(base), base.minus(trained)};
}

}  // namespace rlvr
