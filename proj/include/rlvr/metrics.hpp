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

// Information-theoretic and sampling metrics. All logarithms are natural.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rlvr/distribution.hpp"

namespace rlvr {

double entropy(const FiniteDistribution& p);

// KL(p || q). Throws kAbsoluteContinuityViolation when p puts mass where q
// has none (the divergence is infinite).
double kl(const FiniteDistribution& p, const FiniteDistribution& q);

// Half the L1 distance, in [0, 1].
double total_variation(const FiniteDistribution& p, const FiniteDistribution& q);

struct PinskerReport {
  double tv;        // 0.5 * ||p - q||_1
  double l1;        // ||p - q||_1
  double sqrt_2kl;  // sqrt(2 KL(p || q))
  bool holds;       // l1 <= sqrt_2kl + 1e-12
};

PinskerReport pinsker_check(const FiniteDistribution& p,
                            const FiniteDistribution& q);

// 1 - (1 - p_correct)^k.
double pass_at_k_exact(double p_correct, std::uint64_t k);

// Unbiased estimator 1 - C(n-c, k) / C(n, k) from n draws with c correct.
// Exact integer binomials are used while C(n, k) fits in 64 bits, log-gamma
// otherwise.
double pass_at_k_estimate(std::uint64_t n, std::uint64_t c, std::uint64_t k);

enum class CurveSource { kExact, kEstimated };

struct PassAtKCurve {
  std::vector<std::uint64_t> k_values;
  std::vector<double> values;
  CurveSource source;
};

PassAtKCurve pass_at_k_curve_exact(double p_correct,
                                   std::span<const std::uint64_t> k_values);
PassAtKCurve pass_at_k_curve_estimated(std::uint64_t n, std::uint64_t c,
                                       std::span<const std::uint64_t> k_values);

// Largest probability an outcome can have while still being missed by k
// independent draws with probability at least zeta: -ln(zeta) / k.
double epsilon_threshold(double zeta, std::uint64_t k);

// exp(-mean(logprobs)).
double perplexity(std::span<const double> token_logprobs);

// Equal-weight mean of per-sequence perplexities.
double corpus_perplexity(const std::vector<std::vector<double>>& sequences);

struct EntropyGapReport {
  double h_base;
  double h_tilt;
  double gap;          // h_base - h_tilt
  double kl_tilt_base; // KL(tilt || base)
};

// Compares H[q] with H[exponential_tilt(q, R, beta)]. The gap is
// non-negative when q is uniform on its support but can be negative in
// general, e.g. q = [0.9, 0.05, 0.05], R = [0, 1, 1], beta = 50.
EntropyGapReport entropy_gap(const FiniteDistribution& q,
                             const RewardTable& rewards, double beta);

}  // namespace rlvr
