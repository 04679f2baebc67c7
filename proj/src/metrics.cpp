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

#include "rlvr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "rlvr/error.hpp"
#include "rlvr/tilt.hpp"

namespace rlvr {

double entropy(const FiniteDistribution& p) {
  double h = 0.0;
  for (double x : p.probs()) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

double kl(const FiniteDistribution& p, const FiniteDistribution& q) {
  require_same_space(p.space(), q.space());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      fail(ErrorCode::kAbsoluteContinuityViolation,
           "KL divergence is infinite: p(" + p.space()->outcome(i) +
               ") > 0 but q is zero there");
    }
    d += p[i] * std::log(p[i] / q[i]);
  }
  // Rounding can leave a tiny negative value when p ~ q.
  return std::max(d, 0.0);
}

double total_variation(const FiniteDistribution& p, const FiniteDistribution& q) {
  require_same_space(p.space(), q.space());
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
  return std::min(0.5 * l1, 1.0);
}

PinskerReport pinsker_check(const FiniteDistribution& p,
                            const FiniteDistribution& q) {
  PinskerReport r{};
  r.tv = total_variation(p, q);
  r.l1 = 2.0 * r.tv;
  r.sqrt_2kl = std::sqrt(2.0 * kl(p, q));
  r.holds = r.l1 <= r.sqrt_2kl + 1e-12;
  return r;
}

double pass_at_k_exact(double p_correct, std::uint64_t k) {
  if (k == 0) fail(ErrorCode::kInvalidParams, "pass@k requires k >= 1");
  if (!(p_correct >= 0.0 && p_correct <= 1.0)) {
    fail(ErrorCode::kInvalidParams, "p_correct must lie in [0, 1]");
  }
  if (p_correct == 1.0) return 1.0;
  const double v = -std::expm1(static_cast<double>(k) * std::log1p(-p_correct));
  return std::clamp(v, 0.0, 1.0);
}

namespace {

__extension__ using Uint128 = unsigned __int128;

// C(n, k) when it fits in 64 bits.
std::optional<std::uint64_t> exact_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Uint128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double pass_at_k_estimate(std::uint64_t n, std::uint64_t c, std::uint64_t k) {
  if (c > n) fail(ErrorCode::kInvalidParams, "correct count exceeds sample count");
  if (k == 0) fail(ErrorCode::kInvalidParams, "pass@k requires k >= 1");
  if (k > n) {
    fail(ErrorCode::kKExceedsN, "k = " + std::to_string(k) +
                                    " exceeds sample count n = " + std::to_string(n));
  }
  if (n - c < k) return 1.0;
  if (c == 0) return 0.0;
  if (auto total = exact_binomial(n, k)) {
    const std::uint64_t all_wrong = *exact_binomial(n - c, k);
    return static_cast<double>(*total - all_wrong) / static_cast<double>(*total);
  }
  const double log_ratio = log_binomial(static_cast<double>(n - c), static_cast<double>(k)) -
                           log_binomial(static_cast<double>(n), static_cast<double>(k));
  return std::clamp(-std::expm1(log_ratio), 0.0, 1.0);
}

namespace {

void require_ascending(std::span<const std::uint64_t> k_values) {
  if (!std::is_sorted(k_values.begin(), k_values.end())) {
    fail(ErrorCode::kInvalidParams, "k values must be ascending");
  }
}

}  // namespace

PassAtKCurve pass_at_k_curve_exact(double p_correct,
                                   std::span<const std::uint64_t> k_values) {
  require_ascending(k_values);
  PassAtKCurve curve{{k_values.begin(), k_values.end()}, {}, CurveSource::kExact};
  for (auto k : k_values) curve.values.push_back(pass_at_k_exact(p_correct, k));
  return curve;
}

PassAtKCurve pass_at_k_curve_estimated(std::uint64_t n, std::uint64_t c,
                                       std::span<const std::uint64_t> k_values) {
  require_ascending(k_values);
  PassAtKCurve curve{{k_values.begin(), k_values.end()}, {}, CurveSource::kEstimated};
  for (auto k : k_values) curve.values.push_back(pass_at_k_estimate(n, c, k));
  return curve;
}

double epsilon_threshold(double zeta, std::uint64_t k) {
  if (!(zeta > 0.0 && zeta < 1.0)) fail(ErrorCode::kInvalidParams, "zeta must lie in (0, 1)");
  if (k == 0) fail(ErrorCode::kInvalidParams, "k must be at least 1");
  return -std::log(zeta) / static_cast<double>(k);
}

double perplexity(std::span<const double> token_logprobs) {
  if (token_logprobs.empty()) fail(ErrorCode::kEmptySequence, "no token log-probabilities");
  double sum = 0.0;
  for (double lp : token_logprobs) {
    if (std::isnan(lp)) fail(ErrorCode::kInvalidParams, "NaN log-probability");
    if (lp > 0.0) fail(ErrorCode::kPositiveLogprob, "log-probability above zero");
    sum += lp;
  }
  return std::exp(-sum / static_cast<double>(token_logprobs.size()));
}

double corpus_perplexity(const std::vector<std::vector<double>>& sequences) {
  if (sequences.empty()) fail(ErrorCode::kEmptySequence, "no sequences");
  double total = 0.0;
  for (const auto& s : sequences) total += perplexity(s);
  return total / static_cast<double>(sequences.size());
}

EntropyGapReport entropy_gap(const FiniteDistribution& q,
                             const RewardTable& rewards, double beta) {
  const FiniteDistribution tilted = exponential_tilt(q, rewards, beta);
  EntropyGapReport r{};
  r.h_base = entropy(q);
  r.h_tilt = entropy(tilted);
  r.gap = r.h_base - r.h_tilt;
  r.kl_tilt_base = kl(tilted, q);
  return r;
}

}  // namespace rlvr
