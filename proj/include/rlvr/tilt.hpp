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

// Closed-form KL-regularized updates: exponential tilting q * exp(beta R),
// its beta -> infinity limit, the exploration-mixed update and the tail-mass
// bound that controls how much probability the mixed update can place on
// correct completions the base model barely samples.

#pragma once

#include <cstddef>
#include <cstdint>

#include "rlvr/distribution.hpp"

namespace rlvr {

// Above this inverse temperature the tilt is replaced by the KL-free limit.
inline constexpr double kTiltDispatchBeta = 700.0;

struct TiltParams {
  double beta = 0.0;   // inverse temperature / dual variable, >= 0
  double gamma = 0.0;  // exploration mixing weight, [0, 1]
  double tau = 0.1;    // tail threshold, (0, 1)
  double delta = 0.0;  // KL budget, >= 0

  // Throws kInvalidParams.
  void validate() const;
};

// q(y) exp(beta R(y)) / Z, computed in log space. Exact zeros of q stay zero.
FiniteDistribution exponential_tilt(const FiniteDistribution& q,
                                    const RewardTable& rewards, double beta);

// q restricted to the correct set and renormalized. Throws kNoCorrectMass
// when q(C) = 0.
FiniteDistribution kl_free_limit(const FiniteDistribution& q,
                                 const RewardTable& rewards);

// (1 - gamma) * tilted + gamma * explore.
FiniteDistribution mixed_update(const FiniteDistribution& tilted,
                                const FiniteDistribution& explore, double gamma);

// gamma + (1 - gamma) e^beta (tau + sqrt(2 delta)).
double tail_mass_bound(const TiltParams& params);

// C \ supp_tau(q): correct completions with q(y) <= tau.
SupportSet tail_set(const FiniteDistribution& q, const RewardTable& rewards,
                    double tau);

// Soft objective E_pi[R] - KL(pi || q) / beta. At beta = 0 the penalty-only
// form -KL(pi || q) is returned. -infinity when pi is not dominated by q.
double soft_objective(const FiniteDistribution& pi, const FiniteDistribution& q,
                      const RewardTable& rewards, double beta);

struct TiltOptimalityReport {
  double oracle_best_objective;  // best grid point
  double tilt_objective;
  double gap;                    // oracle_best - tilt
  double cell_variation;         // objective spread across the best grid cell
  std::size_t grid_points;       // feasible points evaluated
};

// Brute-force check of the tilt against every point of the simplex grid with
// spacing grid_step. |Y| <= 4 (kSpaceTooLarge) and grid_step in [0.01, 0.1].
TiltOptimalityReport verify_tilt_optimality(const FiniteDistribution& q,
                                            const RewardTable& rewards,
                                            double beta, double grid_step);

// Hard-constrained view: the beta in [0, 100] whose tilt reaches expected
// reward rho (bisection, 1e-9 on the reward). Returns 0 when q already meets
// the target; throws kInfeasibleTarget when rho exceeds what any tilt reaches.
double solve_beta_for_target(const FiniteDistribution& q,
                             const RewardTable& rewards, double rho);

// Closest distribution to q in KL with E[R] >= rho.
FiniteDistribution kl_projection(const FiniteDistribution& q,
                                 const RewardTable& rewards, double rho);

// One admissible tail-bound instance: base q, a preceding policy within the
// KL budget, the mixed update and the tail outcomes it is checked on.
struct TailBoundInstance {
  TiltParams params;
  double kl_policy_base;  // KL(pi_theta || q) <= delta
  double max_tail_mass;   // max over S of pi_theta'(y')
  double bound;
  std::size_t tail_size;
  std::size_t outcomes;
  std::size_t rejected;   // draws discarded before this one was admitted
  bool violated;
};

struct TailBoundSweepOptions {
  std::size_t instances = 10000;
  std::size_t min_outcomes = 2;
  std::size_t max_outcomes = 8;
  double max_beta = 3.0;
  double max_policy_beta = 0.5;  // tilt applied to q to build pi_theta
  double max_delta = 0.1;
};

// Instance i is generated from derive_seed(seed, "tail-bound", i), so instances are
// independent of the sweep length.
TailBoundInstance tail_bound_instance(std::uint64_t seed, std::size_t index,
                                      const TailBoundSweepOptions& options);

struct TailBoundSweepResult {
  std::vector<TailBoundInstance> instances;
  std::size_t violations = 0;
  std::size_t rejected = 0;
};

TailBoundSweepResult run_tail_bound_sweep(std::uint64_t seed,
                                          const TailBoundSweepOptions& options);

}  // namespace rlvr
