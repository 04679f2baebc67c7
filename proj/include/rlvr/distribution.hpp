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

// Enumerated completion spaces, distributions over them, binary reward tables
// and the two notions of support on correct completions.
//
// All types are immutable once constructed. Distributions and reward tables
// hold a shared pointer to their space; two spaces are compatible when they
// are the same object or have identical prompt id and outcome list.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rlvr/seed.hpp"

namespace rlvr {

inline constexpr double kNormalizationTolerance = 1e-12;

class OutcomeSpace {
 public:
  OutcomeSpace(std::string prompt_id, std::vector<std::string> outcomes);

  // Space with outcomes named y1..yn.
  static std::shared_ptr<const OutcomeSpace> indexed(std::size_t n,
                                                     std::string prompt_id = "x");

  const std::string& prompt_id() const { return prompt_id_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  std::size_t size() const { return outcomes_.size(); }
  const std::string& outcome(std::size_t i) const { return outcomes_.at(i); }

  // Throws kInvalidSpace for an unknown id.
  std::size_t index_of(const std::string& id) const;

  bool operator==(const OutcomeSpace& other) const {
    return prompt_id_ == other.prompt_id_ && outcomes_ == other.outcomes_;
  }

 private:
  std::string prompt_id_;
  std::vector<std::string> outcomes_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const OutcomeSpace>;

bool same_space(const SpacePtr& a, const SpacePtr& b);
void require_same_space(const SpacePtr& a, const SpacePtr& b);

class FiniteDistribution {
 public:
  // Validates non-negativity, finiteness and unit mass (1e-12).
  FiniteDistribution(SpacePtr space, std::vector<double> probs);

  const SpacePtr& space() const { return space_; }
  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  SpacePtr space_;
  std::vector<double> probs_;
};

class RewardTable {
 public:
  RewardTable(SpacePtr space, std::vector<int> rewards);

  const SpacePtr& space() const { return space_; }
  std::span<const int> values() const { return rewards_; }
  std::size_t size() const { return rewards_.size(); }
  bool correct(std::size_t i) const { return rewards_[i] == 1; }
  int operator[](std::size_t i) const { return rewards_[i]; }

 private:
  SpacePtr space_;
  std::vector<int> rewards_;
};

// Subset of a space, stored as sorted outcome indices.
class SupportSet {
 public:
  SupportSet(SpacePtr space, std::vector<std::size_t> members);

  const SpacePtr& space() const { return space_; }
  const std::vector<std::size_t>& members() const { return members_; }
  std::vector<std::string> ids() const;
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(std::size_t index) const;
  bool is_subset_of(const SupportSet& other) const;
  // this \ other
  SupportSet minus(const SupportSet& other) const;

  bool operator==(const SupportSet& other) const {
    return same_space(space_, other.space_) && members_ == other.members_;
  }

 private:
  SpacePtr space_;
  std::vector<std::size_t> members_;
};

FiniteDistribution normalize(std::span<const double> weights, SpacePtr space);

// {y in C : p(y) > 0}
SupportSet support(const FiniteDistribution& dist, const RewardTable& rewards);

// {y in C : p(y) > epsilon}, epsilon in (0, 1).
SupportSet empirical_support(const FiniteDistribution& dist,
                             const RewardTable& rewards, double epsilon);

// Raw set of positive-probability outcomes, ignoring rewards.
SupportSet positive_set(const FiniteDistribution& dist);

// Sum of p(y) over correct y, i.e. E_p[R].
double correct_mass(const FiniteDistribution& dist, const RewardTable& rewards);

// n i.i.d. outcome indices. Zero-probability outcomes are never returned.
std::vector<std::size_t> sample(const FiniteDistribution& dist,
                                std::uint64_t seed, std::size_t n);

// Draws a single index using the caller's generator.
std::size_t sample_one(std::span<const double> probs, Rng& rng);

}  // namespace rlvr
