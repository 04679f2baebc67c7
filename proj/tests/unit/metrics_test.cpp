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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "rlvr/tilt.hpp"
#include "test_util.hpp"

namespace rlvr {
namespace {

using testing::dist;

TEST(EntropyTest, Examples) {
  EXPECT_EQ(entropy(dist({0, 1, 0})), 0.0);
  EXPECT_NEAR(entropy(dist({0.25, 0.25, 0.25, 0.25})), std::log(4.0), 1e-15);
  const double h = -(0.9 * std::log(0.9) + 2 * 0.05 * std::log(0.05));
  EXPECT_NEAR(entropy(dist({0.9, 0.05, 0.05})), h, 1e-15);
  EXPECT_NEAR(h, 0.3944, 5e-5);
}

TEST(KlTest, Examples) {
  auto q = dist({0.5, 0.5});
  EXPECT_EQ(kl(q, q), 0.0);
  EXPECT_NEAR(kl(dist({1, 0}), q), std::log(2.0), 1e-15);
  EXPECT_RLVR_ERROR(kl(q, dist({1, 0})), ErrorCode::kAbsoluteContinuityViolation);
  EXPECT_RLVR_ERROR(kl(q, dist({0.2, 0.3, 0.5})), ErrorCode::kSpaceMismatch);
}

TEST(TotalVariationTest, Examples) {
  auto q = dist({0.5, 0.5});
  EXPECT_EQ(total_variation(q, q), 0.0);
  EXPECT_EQ(total_variation(dist({1, 0}), dist({0, 1})), 1.0);
  EXPECT_EQ(total_variation(dist({1, 0}), q), 0.5);
}

TEST(PinskerTest, Examples) {
  auto q = dist({0.5, 0.5});
  auto same = pinsker_check(q, q);
  EXPECT_EQ(same.tv, 0.0);
  EXPECT_TRUE(same.holds);
  auto r = pinsker_check(dist({1, 0}), q);
  EXPECT_EQ(r.l1, 1.0);
  EXPECT_NEAR(r.sqrt_2kl, std::sqrt(2 * std::log(2.0)), 1e-15);
  EXPECT_NEAR(r.sqrt_2kl, 1.177, 5e-4);
  EXPECT_TRUE(r.holds);
}

TEST(DivergenceProperty, BasicInequalities) {
  Rng rng(53);
  for (int t = 0; t < 5000; ++t) {
    const std::size_t n = 1 + rng() % 8;
    auto q = dist(testing::random_probs(rng, n));
    auto p = dist(testing::random_probs(rng, n, 0.3));
    const double d = kl(p, q);
    const double tv = total_variation(p, q);
    ASSERT_GE(d, 0.0);
    ASSERT_GE(tv, 0.0);
    ASSERT_LE(tv, 1.0);
    ASSERT_TRUE(pinsker_check(p, q).holds);
    ASSERT_EQ(kl(q, q), 0.0);
  }
}

TEST(PassAtKExactTest, Examples) {
  EXPECT_EQ(pass_at_k_exact(0.0, 7), 0.0);
  EXPECT_EQ(pass_at_k_exact(1.0, 7), 1.0);
  EXPECT_EQ(pass_at_k_exact(0.5, 2), 0.75);
  EXPECT_RLVR_ERROR(pass_at_k_exact(0.5, 0), ErrorCode::kInvalidParams);
  EXPECT_RLVR_ERROR(pass_at_k_exact(1.5, 1), ErrorCode::kInvalidParams);
}

TEST(PassAtKExactTest, StableForTinyProbability) {
  // 1 - (1 - 1e-12)^1000 ~ 1e-9; the naive pow form loses most digits.
  EXPECT_NEAR(pass_at_k_exact(1e-12, 1000), 1e-9, 1e-18);
}

TEST(PassAtKExactProperty, MonotoneInKAndP) {
  Rng rng(59);
  for (int t = 0; t < 2000; ++t) {
    const double p = uniform01(rng);
    const double p2 = std::min(1.0, p + 0.1 * uniform01(rng));
    const std::uint64_t k = 1 + rng() % 200;
    const std::uint64_t k2 = k + rng() % 50;
    ASSERT_LE(pass_at_k_exact(p, k), pass_at_k_exact(p, k2));
    ASSERT_LE(pass_at_k_exact(p, k), pass_at_k_exact(p2, k));
  }
}

TEST(PassAtKEstimateTest, Examples) {
  EXPECT_EQ(pass_at_k_estimate(4, 2, 4), 1.0);
  EXPECT_EQ(pass_at_k_estimate(2, 1, 1), 0.5);
  for (std::uint64_t k = 1; k <= 10; ++k) EXPECT_EQ(pass_at_k_estimate(10, 0, k), 0.0);
  EXPECT_RLVR_ERROR(pass_at_k_estimate(3, 1, 4), ErrorCode::kKExceedsN);
  EXPECT_RLVR_ERROR(pass_at_k_estimate(3, 4, 1), ErrorCode::kInvalidParams);
  EXPECT_RLVR_ERROR(pass_at_k_estimate(3, 1, 0), ErrorCode::kInvalidParams);
}

// Fraction of k-subsets of n draws (c of them correct) containing a correct
// draw, by explicit enumeration of subsets as bitmasks.
double enumerate_pass_at_k(unsigned n, unsigned c, unsigned k) {
  std::uint64_t good = 0;
  std::uint64_t total = 0;
  const std::uint32_t correct_mask = (1u << c) - 1u;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (static_cast<unsigned>(std::popcount(s)) != k) continue;
    ++total;
    good += (s & correct_mask) != 0;
  }
  return static_cast<double>(good) / static_cast<double>(total);
}

TEST(PassAtKEstimateTest, EqualsSubsetEnumerationExactly) {
  for (unsigned n = 1; n <= 12; ++n) {
    for (unsigned c = 0; c <= n; ++c) {
      for (unsigned k = 1; k <= n; ++k) {
        ASSERT_EQ(pass_at_k_estimate(n, c, k), enumerate_pass_at_k(n, c, k))
            << "n=" << n << " c=" << c << " k=" << k;
      }
    }
  }
}

TEST(PassAtKEstimateTest, LargeBudgetsUseLogGamma) {
  // C(16384, 1024) overflows 64 bits; compare with the product form.
  const std::uint64_t n = 16384, c = 3, k = 1024;
  double ratio = 1.0;  // C(n-c, k) / C(n, k) = prod_{i<c} (n-k-i)/(n-i)
  for (std::uint64_t i = 0; i < c; ++i) ratio *= static_cast<double>(n - k - i) / (n - i);
  EXPECT_NEAR(pass_at_k_estimate(n, c, k), 1.0 - ratio, 1e-9);
  const double v = pass_at_k_estimate(16384, 1, 16384);
  EXPECT_EQ(v, 1.0);
}

TEST(PassAtKCurveTest, ShapeAndValidation) {
  const std::vector<std::uint64_t> ks = {1, 2, 8, 64};
  auto exact = pass_at_k_curve_exact(0.1, ks);
  EXPECT_EQ(exact.source, CurveSource::kExact);
  EXPECT_EQ(exact.k_values, ks);
  for (std::size_t i = 1; i < ks.size(); ++i) EXPECT_LE(exact.values[i - 1], exact.values[i]);
  auto est = pass_at_k_curve_estimated(64, 5, ks);
  EXPECT_EQ(est.source, CurveSource::kEstimated);
  for (std::size_t i = 1; i < ks.size(); ++i) EXPECT_LE(est.values[i - 1], est.values[i]);
  for (double v : est.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  const std::vector<std::uint64_t> bad = {4, 2};
  EXPECT_RLVR_ERROR(pass_at_k_curve_exact(0.1, bad), ErrorCode::kInvalidParams);
}

// If the trained model keeps no mass on correct outcomes its curve is flat at
// zero while the base curve tends to one; if its support is inside the base
// support both curves tend to one.
TEST(PassAtKProperty, AsymptoticBoundOnFixtures) {
  auto q = dist({0.7, 0.2, 0.1});
  RewardTable r(q.space(), {0, 1, 1});
  auto collapsed = dist({1.0, 0.0, 0.0});
  auto tilted = exponential_tilt(q, r, 3.0);
  ASSERT_TRUE(support(tilted, r).is_subset_of(support(q, r)));
  for (std::uint64_t k : {1ull, 10ull, 100ull, 10000ull}) {
    EXPECT_EQ(pass_at_k_exact(correct_mass(collapsed, r), k), 0.0);
  }
  EXPECT_NEAR(pass_at_k_exact(correct_mass(q, r), 10000), 1.0, 1e-12);
  EXPECT_NEAR(pass_at_k_exact(correct_mass(tilted, r), 10000), 1.0, 1e-12);
}

TEST(EpsilonThresholdTest, Examples) {
  EXPECT_NEAR(epsilon_threshold(0.05, 8096), 3.70e-4, 0.01 * 3.70e-4);
  EXPECT_NEAR(epsilon_threshold(std::exp(-1.0), 1), 1.0, 1e-15);
  EXPECT_NEAR(epsilon_threshold(0.05, 2048), 1.463e-3, 5e-7);
  EXPECT_RLVR_ERROR(epsilon_threshold(0.0, 10), ErrorCode::kInvalidParams);
  EXPECT_RLVR_ERROR(epsilon_threshold(1.0, 10), ErrorCode::kInvalidParams);
  EXPECT_RLVR_ERROR(epsilon_threshold(0.5, 0), ErrorCode::kInvalidParams);
}

double miss_rate(double p, std::uint64_t k, int trials, std::uint64_t seed) {
  int misses = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, "miss", t));
    bool hit = false;
    for (std::uint64_t i = 0; i < k && !hit; ++i) hit = uniform01(rng) < p;
    misses += !hit;
  }
  return static_cast<double>(misses) / trials;
}

TEST(EpsilonThresholdProperty, MissRateSoundness) {
  const double zeta = 0.05;
  const std::uint64_t k = 200;
  const int trials = 1000;
  const double eps = epsilon_threshold(zeta, k);
  const double sigma = std::sqrt(zeta * (1 - zeta) / trials);
  EXPECT_LT(miss_rate(2 * eps, k, trials, 1), zeta);
  EXPECT_LE(miss_rate(eps, k, trials, 2), zeta + 3 * sigma);
}

TEST(PerplexityTest, Examples) {
  EXPECT_EQ(perplexity(std::vector<double>{0, 0, 0}), 1.0);
  EXPECT_NEAR(perplexity(std::vector<double>(5, -std::log(2.0))), 2.0, 1e-15);
  EXPECT_NEAR(perplexity(std::vector<double>{-1, -3}), std::exp(2.0), 1e-14);
  EXPECT_RLVR_ERROR(perplexity(std::vector<double>{}), ErrorCode::kEmptySequence);
  EXPECT_RLVR_ERROR(perplexity(std::vector<double>{-1, 0.5}), ErrorCode::kPositiveLogprob);
}

TEST(PerplexityTest, CorpusUsesEqualSequenceWeights) {
  // Per-sequence perplexities 1 and e^2; the token-weighted mean would differ.
  std::vector<std::vector<double>> seqs = {{0, 0, 0, 0}, {-2}};
  EXPECT_NEAR(corpus_perplexity(seqs), (1.0 + std::exp(2.0)) / 2.0, 1e-14);
  EXPECT_RLVR_ERROR(corpus_perplexity({}), ErrorCode::kEmptySequence);
}

TEST(EntropyGapTest, ConstantRewardGivesZeroGap) {
  auto q = dist({0.6, 0.4, 0.0});
  auto g = entropy_gap(q, RewardTable(q.space(), {1, 1, 0}), 7.0);
  EXPECT_EQ(g.gap, 0.0);
  EXPECT_EQ(g.kl_tilt_base, 0.0);
}

TEST(EntropyGapTest, PinnedCounterexample) {
  auto q = dist({0.9, 0.05, 0.05});
  auto g = entropy_gap(q, RewardTable(q.space(), {0, 1, 1}), 50.0);
  EXPECT_NEAR(g.h_tilt, std::log(2.0), 1e-12);
  EXPECT_NEAR(g.h_base, 0.3944, 5e-5);
  EXPECT_LT(g.gap, 0.0);
}

TEST(EntropyGapProperty, UniformBaseNeverGainsEntropy) {
  Rng rng(61);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 1 + rng() % 8;
    std::vector<double> w(n);
    for (auto& x : w) x = uniform01(rng) < 0.3 ? 0.0 : 1.0;
    w[rng() % n] = 1.0;
    auto q = normalize(w, OutcomeSpace::indexed(n));
    RewardTable r(q.space(), testing::random_rewards(rng, n));
    const double beta = 20.0 * uniform01(rng);
    auto g = entropy_gap(q, r, beta);
    ASSERT_GE(g.gap, -1e-12);
  }
}

TEST(EntropyGapProperty, ZeroGapIffRewardConstantOnSupport) {
  Rng rng(67);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 2 + rng() % 6;
    std::vector<double> w(n);
    for (auto& x : w) x = uniform01(rng) < 0.3 ? 0.0 : 1.0;
    w[0] = 1.0;
    auto q = normalize(w, OutcomeSpace::indexed(n));
    RewardTable r(q.space(), testing::random_rewards(rng, n));
    int lo = 1, hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (q[i] > 0.0) {
        lo = std::min(lo, r[i]);
        hi = std::max(hi, r[i]);
      }
    }
    const bool constant = lo == hi;
    auto g = entropy_gap(q, r, 0.5 + 10.0 * uniform01(rng));
    if (constant) {
      ASSERT_LE(std::abs(g.gap), 1e-12);
    } else {
      ASSERT_GT(g.gap, 1e-12);
    }
  }
}

}  // namespace
}  // namespace rlvr
