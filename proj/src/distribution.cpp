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

#include "rlvr/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rlvr/error.hpp"

namespace rlvr {

OutcomeSpace::OutcomeSpace(std::string prompt_id,
                           std::vector<std::string> outcomes)
    : prompt_id_(std::move(prompt_id)), outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) {
    fail(ErrorCode::kInvalidSpace, "outcome space must have at least one outcome");
  }
  index_.reserve(outcomes_.size());
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (!index_.emplace(outcomes_[i], i).second) {
      fail(ErrorCode::kInvalidSpace, "duplicate outcome id '" + outcomes_[i] + "'");
    }
  }
}

SpacePtr OutcomeSpace::indexed(std::size_t n, std::string prompt_id) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) ids.push_back("y" + std::to_string(i));
  return std::make_shared<const OutcomeSpace>(std::move(prompt_id), std::move(ids));
}

std::size_t OutcomeSpace::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    fail(ErrorCode::kInvalidSpace, "unknown outcome id '" + id + "'");
  }
  return it->second;
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

void require_same_space(const SpacePtr& a, const SpacePtr& b) {
  if (!same_space(a, b)) {
    fail(ErrorCode::kSpaceMismatch, "operands are defined over different outcome spaces");
  }
}

FiniteDistribution::FiniteDistribution(SpacePtr space, std::vector<double> probs)
    : space_(std::move(space)), probs_(std::move(probs)) {
  if (!space_) fail(ErrorCode::kInvalidSpace, "null outcome space");
  if (probs_.size() != space_->size()) {
    fail(ErrorCode::kSpaceMismatch, "probability vector has " +
                                        std::to_string(probs_.size()) +
                                        " entries, space has " +
                                        std::to_string(space_->size()));
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) {
      fail(ErrorCode::kInvalidDistribution, "probabilities must be finite and non-negative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    fail(ErrorCode::kInvalidDistribution,
         "probabilities sum to " + std::to_string(total) + ", expected 1");
  }
}

RewardTable::RewardTable(SpacePtr space, std::vector<int> rewards)
    : space_(std::move(space)), rewards_(std::move(rewards)) {
  if (!space_) fail(ErrorCode::kInvalidSpace, "null outcome space");
  if (rewards_.size() != space_->size()) {
    fail(ErrorCode::kSpaceMismatch, "reward vector does not match outcome space size");
  }
  for (int r : rewards_) {
    if (r != 0 && r != 1) fail(ErrorCode::kInvalidReward, "rewards must be 0 or 1");
  }
}

SupportSet::SupportSet(SpacePtr space, std::vector<std::size_t> members)
    : space_(std::move(space)), members_(std::move(members)) {
  if (!space_) fail(ErrorCode::kInvalidSpace, "null outcome space");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!members_.empty() && members_.back() >= space_->size()) {
    fail(ErrorCode::kInvalidSpace, "support member outside the outcome space");
  }
}

std::vector<std::string> SupportSet::ids() const {
  std::vector<std::string> out;
  out.reserve(members_.size());
  for (std::size_t i : members_) out.push_back(space_->outcome(i));
  return out;
}

bool SupportSet::contains(std::size_t index) const {
  return std::binary_search(members_.begin(), members_.end(), index);
}

bool SupportSet::is_subset_of(const SupportSet& other) const {
  require_same_space(space_, other.space_);
  return std::includes(other.members_.begin(), other.members_.end(),
                       members_.begin(), members_.end());
}

SupportSet SupportSet::minus(const SupportSet& other) const {
  require_same_space(space_, other.space_);
  std::vector<std::size_t> out;
  std::set_difference(members_.begin(), members_.end(), other.members_.begin(),
                      other.members_.end(), std::back_inserter(out));
  return SupportSet(space_, std::move(out));
}

FiniteDistribution normalize(std::span<const double> weights, SpacePtr space) {
  if (!space) fail(ErrorCode::kInvalidSpace, "null outcome space");
  if (weights.size() != space->size()) {
    fail(ErrorCode::kSpaceMismatch, "weight vector does not match outcome space size");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w)) fail(ErrorCode::kNonFiniteWeight, "non-finite weight");
    if (w < 0.0) fail(ErrorCode::kNegativeWeight, "negative weight");
    total += w;
  }
  if (total == 0.0) fail(ErrorCode::kAllZeroWeights, "all weights are zero");
  if (!std::isfinite(total)) fail(ErrorCode::kNonFiniteWeight, "weights overflow");
  std::vector<double> probs(weights.begin(), weights.end());
  for (double& p : probs) p /= total;
  return FiniteDistribution(std::move(space), std::move(probs));
}

SupportSet support(const FiniteDistribution& dist, const RewardTable& rewards) {
  require_same_space(dist.space(), rewards.space());
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (rewards.correct(i) && dist[i] > 0.0) members.push_back(i);
  }
  return SupportSet(dist.space(), std::move(members));
}

SupportSet empirical_support(const FiniteDistribution& dist,
                             const RewardTable& rewards, double epsilon) {
  require_same_space(dist.space(), rewards.space());
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    fail(ErrorCode::kEpsilonOutOfRange, "epsilon must lie in (0, 1)");
  }
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (rewards.correct(i) && dist[i] > epsilon) members.push_back(i);
  }
  return SupportSet(dist.space(), std::move(members));
}

SupportSet positive_set(const FiniteDistribution& dist) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] > 0.0) members.push_back(i);
  }
  return SupportSet(dist.space(), std::move(members));
}

double correct_mass(const FiniteDistribution& dist, const RewardTable& rewards) {
  require_same_space(dist.space(), rewards.space());
  double mass = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (rewards.correct(i)) mass += dist[i];
  }
  return mass;
}

namespace {

std::size_t draw_from_cdf(const std::vector<double>& cdf, Rng& rng) {
  const double u = uniform01(rng) * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it != cdf.end()) return static_cast<std::size_t>(it - cdf.begin());
  // u landed on the rounded total; return the last positive-mass outcome.
  std::size_t i = cdf.size() - 1;
  while (i > 0 && cdf[i] == cdf[i - 1]) --i;
  return i;
}

std::vector<double> cumulative(std::span<const double> probs) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  return cdf;
}

}  // namespace

std::size_t sample_one(std::span<const double> probs, Rng& rng) {
  return draw_from_cdf(cumulative(probs), rng);
}

std::vector<std::size_t> sample(const FiniteDistribution& dist,
                                std::uint64_t seed, std::size_t n) {
  if (n == 0) fail(ErrorCode::kInvalidParams, "sample count must be at least 1");
  const auto cdf = cumulative(dist.probs());
  Rng rng(seed);
  std::vector<std::size_t> out(n);
  for (auto& draw : out) draw = draw_from_cdf(cdf, rng);
  return out;
}

}  // namespace rlvr
