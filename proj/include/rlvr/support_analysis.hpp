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

// Four-way classification of correct completions (or whole problems) by
// whether the base model and the trained model each reach them:
//
//                     trained reaches    trained misses
//   base reaches      Preservation       Shrinkage
//   base misses       Expansion          OutOfSupport

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rlvr/distribution.hpp"
#include "rlvr/sample_log.hpp"

namespace rlvr {

enum class SupportCategory { kPreservation, kShrinkage, kExpansion, kOutOfSupport };

inline constexpr std::array<SupportCategory, 4> kAllCategories = {
    SupportCategory::kPreservation, SupportCategory::kShrinkage,
    SupportCategory::kExpansion, SupportCategory::kOutOfSupport};

std::string_view category_name(SupportCategory category);

// Strict "> epsilon" on both sides, so q = pi = epsilon is OutOfSupport.
SupportCategory categorize_completion(double q_prob, double pi_prob, double epsilon);

SupportCategory categorize_problem(bool base_solved, bool rlvr_solved);

struct SupportItem {
  std::string id;
  SupportCategory category;
  bool base_reached;
  bool rlvr_reached;
  std::size_t base_records = 0;  // log-based reports only
  std::size_t rlvr_records = 0;
  bool insufficient = false;     // fewer records than the budget
};

struct SupportReport {
  std::vector<SupportItem> items;
  std::array<std::size_t, 4> counts{};  // indexed by SupportCategory
  std::optional<std::uint64_t> budget_k;
  std::optional<double> epsilon;
  std::optional<double> zeta;
  double base_accuracy = 0.0;  // (Preservation + Shrinkage) / total
  double rlvr_accuracy = 0.0;  // (Preservation + Expansion) / total
  std::vector<std::string> insufficient;

  std::size_t total() const { return items.size(); }
  std::size_t count(SupportCategory c) const { return counts[static_cast<int>(c)]; }
};

// Aggregates counts and accuracies from the per-item categories.
SupportReport assemble_report(std::vector<SupportItem> items);

// Per-problem report. A problem is solved when any of its first budget_k
// records (log order) has reward 1. Problems with fewer records are kept and
// listed in `insufficient`. epsilon is set to epsilon_threshold(zeta, k).
SupportReport support_report_from_logs(const SampleLog& base_log,
                                       const SampleLog& rlvr_log,
                                       std::uint64_t budget_k, double zeta = 0.05);

// Per-completion report over the correct set of known distributions.
SupportReport support_report_from_distributions(const FiniteDistribution& q,
                                                const FiniteDistribution& pi,
                                                const RewardTable& rewards,
                                                double epsilon);

struct SupportShift {
  SupportSet expansion;  // supp_eps(pi) \ supp_eps(q)
  SupportSet shrinkage;  // supp_eps(q) \ supp_eps(pi)
};

SupportShift shrinkage_expansion_sets(const FiniteDistribution& q,
                                      const FiniteDistribution& pi,
                                      const RewardTable& rewards, double epsilon);

}  // namespace rlvr
