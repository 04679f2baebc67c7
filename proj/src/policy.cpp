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

#include "rlvr/policy.hpp"

#include <algorithm>
#include <cmath>

#include "rlvr/error.hpp"
#include "rlvr/metrics.hpp"

namespace rlvr {

TabularPolicy::TabularPolicy(SpacePtr space, std::vector<double> logits,
                             std::vector<bool> support_mask)
    : space_(std::move(space)), logits_(std::move(logits)), mask_(std::move(support_mask)) {
  if (!space_) fail(ErrorCode::kInvalidSpace, "null outcome space");
  if (logits_.size() != space_->size() || mask_.size() != space_->size()) {
    fail(ErrorCode::kSpaceMismatch, "logits and mask must match the outcome space");
  }
  for (std::size_t i = 0; i < logits_.size(); ++i) {
    if (mask_[i] && !std::isfinite(logits_[i])) {
      fail(ErrorCode::kInvalidParams, "unmasked logits must be finite");
    }
  }
}

TabularPolicy TabularPolicy::from_distribution(const FiniteDistribution& q) {
  std::vector<double> logits(q.size(), 0.0);
  std::vector<bool> mask(q.size(), false);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0.0) {
      logits[i] = std::log(q[i]);
      mask[i] = true;
    }
  }
  return TabularPolicy(q.space(), std::move(logits), std::move(mask));
}

void TabularPolicy::apply_update(const std::vector<double>& delta) {
  if (delta.size() != logits_.size()) {
    fail(ErrorCode::kSpaceMismatch, "update does not match the policy size");
  }
  for (std::size_t i = 0; i < logits_.size(); ++i) {
    if (mask_[i]) logits_[i] += delta[i];
  }
}

FiniteDistribution materialize(const TabularPolicy& policy) {
  const auto& logits = policy.logits();
  const auto& mask = policy.support_mask();
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask[i]) max_logit = std::max(max_logit, logits[i]);
  }
  if (!std::isfinite(max_logit)) {
    fail(ErrorCode::kEmptySupport, "policy has no unmasked outcome");
  }
  std::vector<double> probs(logits.size(), 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!mask[i]) continue;
    probs[i] = std::exp(logits[i] - max_logit);
    z += probs[i];
  }
  for (double& p : probs) p /= z;
  return FiniteDistribution(policy.space(), std::move(probs));
}

namespace {

void check_dominated(const TabularPolicy& policy, const FiniteDistribution& q) {
  for (std::size_t i = 0; i < policy.size(); ++i) {
    if (policy.support_mask()[i] && q[i] == 0.0) {
      fail(ErrorCode::kAbsoluteContinuityViolation,
           "policy support includes " + q.space()->outcome(i) +
               " where the base distribution is zero");
    }
  }
}

// Gradient of -(1/beta) KL(pi || q) w.r.t. the logits:
//   -(1/beta) pi_j (log(pi_j / q_j) - KL).
std::vector<double> kl_penalty_gradient(const FiniteDistribution& pi,
                                        const FiniteDistribution& q, double beta) {
  std::vector<double> g(pi.size(), 0.0);
  if (beta == kKlFree) return g;
  const double divergence = kl(pi, q);
  for (std::size_t j = 0; j < pi.size(); ++j) {
    if (pi[j] == 0.0) continue;
    g[j] = -(pi[j] / beta) * (std::log(pi[j] / q[j]) - divergence);
  }
  return g;
}

double kl_or_infinity(const FiniteDistribution& p, const FiniteDistribution& q) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0 && q[i] == 0.0) return std::numeric_limits<double>::infinity();
  }
  return kl(p, q);
}

double max_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> exact_gradient(const TabularPolicy& policy,
                                   const FiniteDistribution& q,
                                   const RewardTable& rewards, double beta) {
  require_same_space(policy.space(), q.space());
  require_same_space(q.space(), rewards.space());
  if (!(beta > 0.0)) fail(ErrorCode::kInvalidParams, "beta must be > 0 (or kKlFree)");
  if (beta != kKlFree) check_dominated(policy, q);

  const FiniteDistribution pi = materialize(policy);
  // dJ/dtheta_j = pi_j (f_j - J) with f = R - (1/beta) log(pi / q); the
  // derivative of f itself integrates to zero under pi.
  std::vector<double> f(pi.size(), 0.0);
  double objective = 0.0;
  for (std::size_t j = 0; j < pi.size(); ++j) {
    if (pi[j] == 0.0) continue;
    f[j] = rewards[j];
    if (beta != kKlFree) f[j] -= std::log(pi[j] / q[j]) / beta;
    objective += pi[j] * f[j];
  }
  std::vector<double> grad(pi.size(), 0.0);
  for (std::size_t j = 0; j < pi.size(); ++j) {
    if (policy.support_mask()[j]) grad[j] = pi[j] * (f[j] - objective);
  }
  return grad;
}

void TrainConfig::validate() const {
  if (!(beta > 0.0)) fail(ErrorCode::kInvalidParams, "beta must be > 0 (or infinite)");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    fail(ErrorCode::kInvalidParams, "learning_rate must be positive");
  }
  if (group_size < 1) fail(ErrorCode::kInvalidParams, "group_size must be >= 1");
  if (!(gradient_tolerance >= 0.0)) {
    fail(ErrorCode::kInvalidParams, "gradient_tolerance must be >= 0");
  }
}

bool keep_prompt(double accuracy, PromptFilter mode) {
  switch (mode) {
    case PromptFilter::kOff: return true;
    case PromptFilter::kDropAllWrong: return accuracy > 0.0;
    case PromptFilter::kDropAllWrongAndAllRight: return accuracy > 0.0 && accuracy < 1.0;
  }
  return true;
}

std::set<std::string> filter_batch(const std::map<std::string, double>& accuracies,
                                   PromptFilter mode) {
  std::set<std::string> kept;
  for (const auto& [prompt, acc] : accuracies) {
    if (!(acc >= 0.0 && acc <= 1.0)) {
      fail(ErrorCode::kInvalidParams, "accuracy of " + prompt + " outside [0, 1]");
    }
    if (keep_prompt(acc, mode)) kept.insert(prompt);
  }
  return kept;
}

std::pair<TabularPolicy, StepRecord> reinforce_step(const TabularPolicy& policy,
                                                    const FiniteDistribution& q,
                                                    const RewardTable& rewards,
                                                    const TrainConfig& config,
                                                    Rng& rng) {
  require_same_space(policy.space(), q.space());
  require_same_space(q.space(), rewards.space());
  config.validate();
  if (config.beta != kKlFree) check_dominated(policy, q);

  const FiniteDistribution pi = materialize(policy);
  const std::size_t m = pi.size();
  const std::size_t group = config.group_size;
  StepRecord rec;
  rec.sampled.reserve(group);
  double hits = 0.0;
  for (std::size_t i = 0; i < group; ++i) {
    const std::size_t y = sample_one(pi.probs(), rng);
    rec.sampled.push_back(y);
    rec.rewards.push_back(rewards[y]);
    hits += rewards[y];
  }
  rec.group_accuracy = hits / static_cast<double>(group);
  rec.reward_update.assign(m, 0.0);
  rec.update.assign(m, 0.0);

  if (!keep_prompt(rec.group_accuracy, config.prompt_filter)) {
    rec.skipped = true;
    return {policy, std::move(rec)};
  }

  for (int r : rec.rewards) {
    const double baseline =
        config.baseline == Baseline::kGroupMean ? rec.group_accuracy : 0.0;
    rec.advantages.push_back(static_cast<double>(r) - baseline);
  }

  // grad log pi(y) = e_y - pi over unmasked coordinates.
  const double scale = config.learning_rate / static_cast<double>(group);
  for (std::size_t i = 0; i < group; ++i) {
    const double a = rec.advantages[i];
    if (a == 0.0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (!policy.support_mask()[j]) continue;
      const double score = (j == rec.sampled[i] ? 1.0 : 0.0) - pi[j];
      rec.reward_update[j] += scale * a * score;
    }
  }
  const auto kl_grad = kl_penalty_gradient(pi, q, config.beta);
  for (std::size_t j = 0; j < m; ++j) {
    if (!policy.support_mask()[j]) continue;
    rec.update[j] = rec.reward_update[j] + config.learning_rate * kl_grad[j];
  }

  TabularPolicy next = policy;
  next.apply_update(rec.update);
  return {std::move(next), std::move(rec)};
}

TrainTrace train(const TabularPolicy& policy0, const FiniteDistribution& q,
                 const RewardTable& rewards, const TrainConfig& config) {
  config.validate();
  require_same_space(policy0.space(), q.space());
  require_same_space(q.space(), rewards.space());

  TrainTrace trace{{}, policy0};
  TabularPolicy& policy = trace.final_policy;
  Rng rng(derive_seed(config.seed, "train", 0));
  trace.records.reserve(config.steps);

  const bool exact = config.mode == GradientMode::kExact;
  std::vector<double> grad;
  if (exact && config.steps > 0) grad = exact_gradient(policy, q, rewards, config.beta);

  for (std::size_t step = 1; step <= config.steps; ++step) {
    TrainRecord rec{};
    rec.step = step;
    if (exact) {
      for (double& g : grad) g *= config.learning_rate;
      policy.apply_update(grad);
    } else {
      auto [next, step_rec] = reinforce_step(policy, q, rewards, config, rng);
      policy = std::move(next);
      rec.group_accuracy = step_rec.group_accuracy;
      rec.skipped = step_rec.skipped;
    }
    const FiniteDistribution pi = materialize(policy);
    rec.expected_reward = correct_mass(pi, rewards);
    rec.kl_to_base = kl_or_infinity(pi, q);
    rec.entropy = entropy(pi);
    if (exact) {
      grad = exact_gradient(policy, q, rewards, config.beta);
      rec.gradient_norm = max_norm(grad);
    }
    rec.probs.assign(pi.probs().begin(), pi.probs().end());
    trace.records.push_back(std::move(rec));
    if (exact && config.gradient_tolerance > 0.0 &&
        trace.records.back().gradient_norm < config.gradient_tolerance) {
      break;
    }
  }
  return trace;
}

}  // namespace rlvr
