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

#include "rlvr/tilt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rlvr/error.hpp"
#include "rlvr/metrics.hpp"
#include "rlvr/seed.hpp"

namespace rlvr {

void TiltParams::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    fail(ErrorCode::kInvalidParams, "beta must be finite and >= 0");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    fail(ErrorCode::kGammaOutOfRange, "gamma must lie in [0, 1]");
  }
  if (!(tau > 0.0 && tau < 1.0)) fail(ErrorCode::kInvalidParams, "tau must lie in (0, 1)");
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    fail(ErrorCode::kInvalidParams, "delta must be finite and >= 0");
  }
}

namespace {

bool reward_constant_on_support(const FiniteDistribution& q,
                                const RewardTable& rewards) {
  int seen = -1;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == 0.0) continue;
    if (seen == -1) {
      seen = rewards[i];
    } else if (rewards[i] != seen) {
      return false;
    }
  }
  return true;
}

}  // namespace

FiniteDistribution exponential_tilt(const FiniteDistribution& q,
                                    const RewardTable& rewards, double beta) {
  require_same_space(q.space(), rewards.space());
  if (!(beta >= 0.0)) fail(ErrorCode::kInvalidParams, "beta must be >= 0");
  // A reward that is constant on supp(q) cancels in the normalizer.
  if (beta == 0.0 || reward_constant_on_support(q, rewards)) return q;
  if (beta > kTiltDispatchBeta) return kl_free_limit(q, rewards);

  std::vector<double> logw(q.size(), -std::numeric_limits<double>::infinity());
  double max_logw = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == 0.0) continue;
    logw[i] = std::log(q[i]) + beta * rewards[i];
    max_logw = std::max(max_logw, logw[i]);
  }
  std::vector<double> probs(q.size(), 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == 0.0) continue;
    probs[i] = std::exp(logw[i] - max_logw);
    z += probs[i];
  }
  for (double& p : probs) p /= z;
  return FiniteDistribution(q.space(), std::move(probs));
}

FiniteDistribution kl_free_limit(const FiniteDistribution& q,
                                 const RewardTable& rewards) {
  const double mass = correct_mass(q, rewards);
  if (mass == 0.0) {
    fail(ErrorCode::kNoCorrectMass,
         "base distribution assigns no mass to correct completions");
  }
  std::vector<double> probs(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (rewards.correct(i)) probs[i] = q[i] / mass;
  }
  return FiniteDistribution(q.space(), std::move(probs));
}

FiniteDistribution mixed_update(const FiniteDistribution& tilted,
                                const FiniteDistribution& explore, double gamma) {
  require_same_space(tilted.space(), explore.space());
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    fail(ErrorCode::kGammaOutOfRange, "gamma must lie in [0, 1]");
  }
  std::vector<double> probs(tilted.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = (1.0 - gamma) * tilted[i] + gamma * explore[i];
  }
  return FiniteDistribution(tilted.space(), std::move(probs));
}

double tail_mass_bound(const TiltParams& params) {
  params.validate();
  if (params.gamma == 1.0) return 1.0;
  return params.gamma + (1.0 - params.gamma) * std::exp(params.beta) *
                            (params.tau + std::sqrt(2.0 * params.delta));
}

SupportSet tail_set(const FiniteDistribution& q, const RewardTable& rewards,
                    double tau) {
  std::vector<std::size_t> correct;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    if (rewards.correct(i)) correct.push_back(i);
  }
  return SupportSet(q.space(), std::move(correct))
      .minus(empirical_support(q, rewards, tau));
}

namespace {

// Objective on raw probability vectors; shared by the public entry point and
// the grid enumeration.
double objective(std::span<const double> pi, const FiniteDistribution& q,
                 const RewardTable& rewards, double beta) {
  double reward = 0.0;
  double divergence = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] == 0.0) continue;
    if (q[i] == 0.0) return -std::numeric_limits<double>::infinity();
    if (rewards.correct(i)) reward += pi[i];
    divergence += pi[i] * std::log(pi[i] / q[i]);
  }
  if (beta == 0.0) return -divergence;
  return reward - divergence / beta;
}

}  // namespace

double soft_objective(const FiniteDistribution& pi, const FiniteDistribution& q,
                      const RewardTable& rewards, double beta) {
  require_same_space(pi.space(), q.space());
  require_same_space(q.space(), rewards.space());
  if (!(beta >= 0.0)) fail(ErrorCode::kInvalidParams, "beta must be >= 0");
  return objective(pi.probs(), q, rewards, beta);
}

TiltOptimalityReport verify_tilt_optimality(const FiniteDistribution& q,
                                            const RewardTable& rewards,
                                            double beta, double grid_step) {
  require_same_space(q.space(), rewards.space());
  const std::size_t m = q.size();
  if (m > 4) {
    fail(ErrorCode::kSpaceTooLarge, "grid oracle supports at most 4 outcomes");
  }
  if (!(grid_step >= 0.01 - 1e-15 && grid_step <= 0.1)) {
    fail(ErrorCode::kInvalidParams, "grid_step must lie in [0.01, 0.1]");
  }
  const auto cells = static_cast<int>(std::lround(1.0 / grid_step));
  if (std::abs(cells * grid_step - 1.0) > 1e-9) {
    fail(ErrorCode::kInvalidParams, "grid_step must divide 1");
  }

  const FiniteDistribution tilted = exponential_tilt(q, rewards, beta);
  TiltOptimalityReport report{};
  report.tilt_objective = objective(tilted.probs(), q, rewards, beta);
  report.oracle_best_objective = -std::numeric_limits<double>::infinity();

  std::vector<int> counts(m, 0);
  std::vector<double> point(m, 0.0);
  const double step = 1.0 / cells;
  auto visit = [&] {
    double near = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      point[i] = counts[i] * step;
      near = std::max(near, std::abs(point[i] - tilted[i]));
    }
    const double value = objective(point, q, rewards, beta);
    if (!std::isfinite(value)) return;
    ++report.grid_points;
    report.oracle_best_objective = std::max(report.oracle_best_objective, value);
    if (near <= step + 1e-12) {
      report.cell_variation =
          std::max(report.cell_variation, std::abs(report.tilt_objective - value));
    }
  };
  // Enumerate compositions of `cells` into m non-negative parts.
  auto recurse = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 1 == m) {
      counts[pos] = remaining;
      visit();
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[pos] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  recurse(recurse, 0, cells);
  report.gap = report.oracle_best_objective - report.tilt_objective;
  return report;
}

double solve_beta_for_target(const FiniteDistribution& q,
                             const RewardTable& rewards, double rho) {
  constexpr double kTolerance = 1e-9;
  constexpr double kMaxBeta = 100.0;
  if (!std::isfinite(rho)) fail(ErrorCode::kInvalidParams, "target reward must be finite");
  auto reward_at = [&](double beta) {
    return correct_mass(exponential_tilt(q, rewards, beta), rewards);
  };
  if (rho <= correct_mass(q, rewards)) return 0.0;
  if (rho > 1.0 || reward_at(kMaxBeta) < rho - kTolerance) {
    fail(ErrorCode::kInfeasibleTarget,
         "target reward " + std::to_string(rho) + " is not reachable by tilting");
  }
  double lo = 0.0;
  double hi = kMaxBeta;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double value = reward_at(mid);
    if (std::abs(value - rho) <= kTolerance) return mid;
    (value < rho ? lo : hi) = mid;
  }
  return hi;
}

FiniteDistribution kl_projection(const FiniteDistribution& q,
                                 const RewardTable& rewards, double rho) {
  return exponential_tilt(q, rewards, solve_beta_for_target(q, rewards, rho));
}

namespace {

std::vector<double> random_weights(Rng& rng, std::size_t m, bool allow_zero) {
  std::vector<double> w(m);
  for (auto& x : w) {
    const double kind = uniform01(rng);
    const double u = uniform01(rng);
    if (allow_zero && kind < 0.1) {
      x = 0.0;
    } else if (kind < 0.45) {
      x = 0.05 * u;  // candidate tail mass
    } else {
      x = 0.05 + u;
    }
  }
  if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) w[0] = 1.0;
  return w;
}

}  // namespace

TailBoundInstance tail_bound_instance(std::uint64_t seed, std::size_t index,
                                      const TailBoundSweepOptions& options) {
  if (options.min_outcomes < 1 || options.max_outcomes < options.min_outcomes) {
    fail(ErrorCode::kInvalidParams, "invalid outcome range");
  }
  Rng rng(derive_seed(seed, "tail-bound", index));
  constexpr std::size_t kMaxAttempts = 100000;
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::size_t m =
        options.min_outcomes + rng() % (options.max_outcomes - options.min_outcomes + 1);
    auto space = OutcomeSpace::indexed(m);
    const auto q = normalize(random_weights(rng, m, true), space);
    std::vector<int> r(m);
    for (auto& x : r) x = uniform01(rng) < 0.6 ? 1 : 0;
    const RewardTable rewards(space, r);

    TiltParams params;
    params.tau = 0.005 + 0.3 * uniform01(rng);
    params.gamma = std::pow(uniform01(rng), 3.0);
    params.beta = options.max_beta * uniform01(rng);
    params.delta = options.max_delta * (1.0 - uniform01(rng));  // (0, max]
    const double policy_beta = options.max_policy_beta * uniform01(rng);
    const auto explore = normalize(random_weights(rng, m, false), space);

    const auto policy = exponential_tilt(q, rewards, policy_beta);
    const double divergence = kl(policy, q);
    const auto tail = tail_set(q, rewards, params.tau);
    if (divergence > params.delta || tail.empty()) continue;

    const auto updated =
        mixed_update(exponential_tilt(policy, rewards, params.beta), explore, params.gamma);
    TailBoundInstance inst{};
    inst.params = params;
    inst.kl_policy_base = divergence;
    inst.bound = tail_mass_bound(params);
    inst.tail_size = tail.size();
    inst.outcomes = m;
    inst.rejected = attempt;
    for (std::size_t y : tail.members()) {
      inst.max_tail_mass = std::max(inst.max_tail_mass, updated[y]);
    }
    inst.violated = inst.max_tail_mass > inst.bound + 1e-12;
    return inst;
  }
  fail(ErrorCode::kInternal, "could not generate an admissible tail-bound instance");
}

TailBoundSweepResult run_tail_bound_sweep(std::uint64_t seed,
                                          const TailBoundSweepOptions& options) {
  TailBoundSweepResult result;
  result.instances.reserve(options.instances);
  for (std::size_t i = 0; i < options.instances; ++i) {
    result.instances.push_back(tail_bound_instance(seed, i, options));
    const auto& inst = result.instances.back();
    result.violations += inst.violated ? 1 : 0;
    result.rejected += inst.rejected;
  }
  return result;
}

}  // namespace rlvr
