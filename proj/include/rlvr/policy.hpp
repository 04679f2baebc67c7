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

// Policy-gradient training of tabular softmax policies on the objective
//
//   J(theta) = E_{y ~ pi_theta}[ R(y) - (1/beta) log(pi_theta(y) / q(y)) ].
//
// Outcomes outside the policy's support mask have probability exactly zero
// and their logits are never written, so support can only shrink.

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rlvr/distribution.hpp"
#include "rlvr/seed.hpp"

namespace rlvr {

// beta value selecting the KL-free objective E[R].
inline constexpr double kKlFree = std::numeric_limits<double>::infinity();

class TabularPolicy {
 public:
  TabularPolicy(SpacePtr space, std::vector<double> logits,
                std::vector<bool> support_mask);

  // logits = log q on supp(q), mask = (q > 0); materializes back to q.
  static TabularPolicy from_distribution(const FiniteDistribution& q);

  const SpacePtr& space() const { return space_; }
  const std::vector<double>& logits() const { return logits_; }
  const std::vector<bool>& support_mask() const { return mask_; }
  std::size_t size() const { return logits_.size(); }

  // Adds delta to every unmasked logit. Masked entries of delta are ignored.
  void apply_update(const std::vector<double>& delta);

 private:
  SpacePtr space_;
  std::vector<double> logits_;
  std::vector<bool> mask_;
};

// Softmax over unmasked logits; masked outcomes get exactly 0.
FiniteDistribution materialize(const TabularPolicy& policy);

// dJ/dtheta in closed form. Masked coordinates are 0. With finite beta every
// unmasked outcome must have q > 0 (kAbsoluteContinuityViolation).
std::vector<double> exact_gradient(const TabularPolicy& policy,
                                   const FiniteDistribution& q,
                                   const RewardTable& rewards, double beta);

enum class Baseline { kNone, kGroupMean };
enum class PromptFilter { kOff, kDropAllWrong, kDropAllWrongAndAllRight };
enum class GradientMode { kExact, kReinforce };

struct TrainConfig {
  double beta = 1.0;  // kKlFree drops the KL term
  double learning_rate = 0.1;
  std::size_t group_size = 8;
  std::size_t steps = 100;
  Baseline baseline = Baseline::kGroupMean;
  PromptFilter prompt_filter = PromptFilter::kOff;
  GradientMode mode = GradientMode::kReinforce;
  std::uint64_t seed = 0;
  // Exact mode stops once the gradient max-norm falls below this (0 = never).
  double gradient_tolerance = 0.0;

  void validate() const;  // kInvalidParams
};

struct StepRecord {
  std::vector<std::size_t> sampled;
  std::vector<int> rewards;
  std::vector<double> advantages;
  double group_accuracy = 0.0;
  bool skipped = false;                // removed by the prompt filter
  std::vector<double> reward_update;   // lr * sampled policy-gradient term
  std::vector<double> update;          // total delta applied to the logits
};

// One sampled step: group_size draws from the current policy, advantages
// (reward minus optional group mean), the score-function reward gradient on
// the drawn outcomes plus the analytic gradient of -(1/beta) KL(pi || q).
std::pair<TabularPolicy, StepRecord> reinforce_step(const TabularPolicy& policy,
                                                    const FiniteDistribution& q,
                                                    const RewardTable& rewards,
                                                    const TrainConfig& config,
                                                    Rng& rng);

struct TrainRecord {
  std::size_t step;        // 1-based
  double expected_reward;  // E_pi[R]
  double kl_to_base;       // KL(pi || q); +inf if pi is not dominated by q
  double entropy;
  double gradient_norm;    // max-norm of the exact gradient (exact mode)
  double group_accuracy;   // reinforce mode
  bool skipped;
  std::vector<double> probs;
};

struct TrainTrace {
  std::vector<TrainRecord> records;
  TabularPolicy final_policy;
};

TrainTrace train(const TabularPolicy& policy0, const FiniteDistribution& q,
                 const RewardTable& rewards, const TrainConfig& config);

bool keep_prompt(double accuracy, PromptFilter mode);

std::set<std::string> filter_batch(const std::map<std::string, double>& accuracies,
                                   PromptFilter mode);

}  // namespace rlvr
