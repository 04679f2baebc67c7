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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "rlvr/distribution.hpp"
#include "rlvr/genmodel.hpp"
#include "rlvr/metrics.hpp"
#include "rlvr/policy.hpp"
#include "rlvr/seed.hpp"
#include "rlvr/support_analysis.hpp"
#include "rlvr/tilt.hpp"

namespace fs = std::filesystem;
using namespace rlvr;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> random_probs(Rng& rng, std::size_t n, double zero_fraction) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    x = uniform01(rng) < zero_fraction ? 0.0 : -std::log(1.0 - uniform01(rng));
    total += x;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : w) x /= total;
  return w;
}

std::vector<int> random_rewards(Rng& rng, std::size_t n) {
  std::vector<int> r(n);
  for (auto& x : r) x = uniform01(rng) < 0.5;
  return r;
}

FiniteDistribution normalized(std::vector<double> w) {
  const auto n = w.size();
  return normalize(w, OutcomeSpace::indexed(n));
}

// Masked-outcome probability stays bitwise zero through sampled training.
Verdict c1_masked_outcomes() {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(101, "acceptance/c1", 0));
  std::size_t runs = 0, checked = 0, nonzero = 0;
  for (; runs < 100; ++runs) {
    const std::size_t n = 3 + rng() % 6;
    auto w = random_probs(rng, n, 0.0);
    // Between one and n - 1 outcomes masked out of the base.
    const std::size_t masked = 1 + rng() % (n - 1);
    for (std::size_t i = 0; i < masked; ++i) w[(i * 7 + runs) % n] = 0.0;
    bool any = false;
    for (double x : w) any |= x > 0.0;
    if (!any) w[0] = 1.0;
    auto q = normalized(w);
    auto rewards = random_rewards(rng, n);
    // Some masked outcomes carry reward, so training pushes toward them.
    for (std::size_t i = 0; i < n; ++i) {
      if (q[i] == 0.0) rewards[i] = 1;
    }
    RewardTable r(q.space(), rewards);
    TrainConfig cfg;
    cfg.steps = 200 + rng() % 101;
    cfg.group_size = 1 + rng() % 16;
    cfg.learning_rate = 0.05 + 0.5 * uniform01(rng);
    cfg.beta = runs % 3 == 0 ? kKlFree : 0.1 + 5.0 * uniform01(rng);
    cfg.baseline = runs % 2 ? Baseline::kGroupMean : Baseline::kNone;
    cfg.seed = derive_seed(101, "acceptance/c1/train", runs);
    auto trace = train(TabularPolicy::from_distribution(q), q, r, cfg);
    for (const auto& rec : trace.records) {
      for (std::size_t i = 0; i < n; ++i) {
        if (q[i] != 0.0) continue;
        ++checked;
        nonzero += std::bit_cast<std::uint64_t>(rec.probs[i]) != 0;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {nonzero == 0 && secs < 10.0,
          fmt("%zu runs, %zu masked probabilities checked, %zu non-zero, %.2fs", runs, checked,
              nonzero, secs)};
}

// Tilt beats the 0.01 simplex grid; exact-gradient training reaches it.
Verdict c2_tilt_optimality() {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(102, "acceptance/c2", 0));
  double worst_gap = -INFINITY, worst_tv = 0.0;
  std::size_t grid_points = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 3 + i % 2;
    auto q = normalized(random_probs(rng, n, 0.0));
    auto rewards = random_rewards(rng, n);
    rewards[rng() % n] = 1 - rewards[0];  // never constant
    RewardTable r(q.space(), rewards);
    const double beta = 0.1 + 4.9 * uniform01(rng);
    auto rep = verify_tilt_optimality(q, r, beta, 0.01);
    worst_gap = std::max(worst_gap, rep.gap);
    grid_points += rep.grid_points;

    TrainConfig cfg;
    cfg.mode = GradientMode::kExact;
    cfg.beta = beta;
    cfg.learning_rate = 0.5;
    cfg.steps = 200000;
    cfg.gradient_tolerance = 1e-9;
    auto trace = train(TabularPolicy::from_distribution(q), q, r, cfg);
    worst_tv = std::max(worst_tv,
                        total_variation(materialize(trace.final_policy),
                                        exponential_tilt(q, r, beta)));
  }
  const double secs = seconds_since(t0);
  return {worst_gap <= 1e-9 && worst_tv <= 1e-4 && secs < 60.0,
          fmt("max grid-over-tilt gap %.3g over %zu points, max TV after training %.3g, %.2fs",
              worst_gap, grid_points, worst_tv, secs)};
}

// beta = 50 tilt against the KL-free limit on every bundled distribution.
Verdict c3_kl_free() {
  struct Case {
    std::vector<double> q;
    std::vector<int> r;
  };
  const std::vector<Case> cases = {
      {{0.5, 0.3, 0.2}, {0, 1, 1}},
      {{0.5, 0.3, 0.2, 0.0}, {0, 1, 1, 1}},
      {{0.7, 0.2, 0.1}, {0, 1, 1}},
      {{0.9, 0.05, 0.05}, {0, 1, 1}},
      {{0.6, 0.25, 0.1, 0.05, 0.0}, {0, 1, 0, 1, 1}},
      {{0.25, 0.25, 0.25, 0.25}, {1, 0, 1, 0}},
      {{0.99, 0.01}, {0, 1}},
      {{1.0, 0.0}, {1, 0}},
  };
  double worst = 0.0;
  for (const auto& c : cases) {
    auto q = normalized(c.q);
    RewardTable r(q.space(), c.r);
    auto tilt = exponential_tilt(q, r, 50.0);
    auto limit = kl_free_limit(q, r);
    for (std::size_t i = 0; i < q.size(); ++i) worst = std::max(worst, std::abs(tilt[i] - limit[i]));
  }
  return {worst <= 1e-6, fmt("%zu distributions, max |tilt - limit| %.3g", cases.size(), worst)};
}

// Tail-mass bound over 10^4 randomized admissible instances.
Verdict c4_tail_bound() {
  const auto t0 = Clock::now();
  TailBoundSweepOptions opts;
  opts.instances = 10000;
  auto result = run_tail_bound_sweep(104, opts);
  double worst_ratio = 0.0;
  for (const auto& inst : result.instances) {
    worst_ratio = std::max(worst_ratio, inst.max_tail_mass / inst.bound);
  }
  const double secs = seconds_since(t0);
  return {result.violations == 0 && result.instances.size() == 10000 && secs < 30.0,
          fmt("%zu instances, %zu violations, max tail/bound %.4f, %.2fs",
              result.instances.size(), result.violations, worst_ratio, secs)};
}

// Exact pass@k against Monte Carlo, and the estimator against enumeration.
Verdict c5_pass_at_k() {
  const std::size_t draws = 100000;
  double worst_z = 0.0;
  int points = 0;
  const std::vector<std::vector<double>> bases = {{0.97, 0.02, 0.01}, {0.7, 0.2, 0.1}};
  for (std::size_t b = 0; b < bases.size(); ++b) {
    auto q = normalized(bases[b]);
    RewardTable r(q.space(), {0, 1, 1});
    for (std::uint64_t k : {1, 4, 16, 64}) {
      Rng rng(derive_seed(105, "acceptance/c5", b * 100 + k));
      std::size_t hits = 0;
      for (std::size_t t = 0; t < draws; ++t) {
        bool hit = false;
        for (std::uint64_t j = 0; j < k && !hit; ++j) hit = r.correct(sample_one(q.probs(), rng));
        hits += hit;
      }
      const double exact = pass_at_k_exact(correct_mass(q, r), k);
      const double mc = static_cast<double>(hits) / draws;
      const double sd = std::sqrt(exact * (1.0 - exact) / draws);
      const double diff = std::abs(mc - exact);
      // A zero-variance point must match exactly up to rounding.
      const double z = sd > 0.0 ? diff / sd : (diff <= 1e-12 ? 0.0 : INFINITY);
      worst_z = std::max(worst_z, z);
      ++points;
    }
  }
  std::size_t compared = 0, mismatches = 0;
  for (unsigned n = 1; n <= 12; ++n) {
    for (unsigned c = 0; c <= n; ++c) {
      for (unsigned k = 1; k <= n; ++k) {
        // Items 0..c-1 are correct; count k-subsets containing one of them.
        std::uint64_t with_hit = 0, total = 0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
          if (static_cast<unsigned>(std::popcount(mask)) != k) continue;
          ++total;
          with_hit += (mask & ((1u << c) - 1u)) != 0;
        }
        const double oracle = static_cast<double>(with_hit) / static_cast<double>(total);
        ++compared;
        mismatches += pass_at_k_estimate(n, c, k) != oracle;
      }
    }
  }
  return {worst_z <= 3.0 && mismatches == 0,
          fmt("%d MC points, max |z| %.2f; %zu (n,c,k) enumerations, %zu mismatches", points,
              worst_z, compared, mismatches)};
}

// Epsilon threshold value and miss-rate soundness at the same budget.
Verdict c6_epsilon() {
  const double zeta = 0.05;
  const std::uint64_t k = 8096;
  const double eps = epsilon_threshold(zeta, k);
  const double rel = std::abs(eps - 3.70e-4) / 3.70e-4;
  const int trials = 1000;
  int misses = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(106, "acceptance/c6", t));
    bool hit = false;
    for (std::uint64_t i = 0; i < k && !hit; ++i) hit = uniform01(rng) < eps;
    misses += !hit;
  }
  const double rate = static_cast<double>(misses) / trials;
  const double limit = zeta + 3.0 * std::sqrt(zeta * (1.0 - zeta) / trials);
  return {rel <= 0.01 && rate <= limit,
          fmt("epsilon %.4g (rel. err %.2f%%); miss rate at p = epsilon %.3f <= %.3f", eps,
              100.0 * rel, rate, limit)};
}

// Entropy gap on uniform bases, zero iff constant, and the counterexample.
Verdict c7_entropy_gap() {
  Rng rng(derive_seed(107, "acceptance/c7", 0));
  double min_gap = INFINITY;
  std::size_t zero_mismatch = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng() % 8;
    std::vector<double> w(n);
    for (auto& x : w) x = uniform01(rng) < 0.3 ? 0.0 : 1.0;
    w[rng() % n] = 1.0;
    auto q = normalized(w);
    auto rewards = random_rewards(rng, n);
    RewardTable r(q.space(), rewards);
    const double beta = 0.1 + 10.0 * uniform01(rng);
    auto g = entropy_gap(q, r, beta);
    min_gap = std::min(min_gap, g.gap);
    int seen = -1;
    bool constant = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (q[i] == 0.0) continue;
      if (seen >= 0 && rewards[i] != seen) constant = false;
      seen = rewards[i];
    }
    zero_mismatch += constant != (g.gap == 0.0);
  }
  auto q = normalized({0.9, 0.05, 0.05});
  auto counter = entropy_gap(q, RewardTable(q.space(), {0, 1, 1}), 50.0);
  // Rounding floor for the computed entropies of equal-weight supports.
  return {min_gap >= -1e-12 && zero_mismatch == 0 && counter.gap < 0.0,
          fmt("min gap %.3g over 1000 uniform bases, %zu zero-gap mismatches, "
              "counterexample gap %.4f",
              min_gap, zero_mismatch, counter.gap)};
}

Verdict c8_pinsker() {
  Rng rng(derive_seed(108, "acceptance/c8", 0));
  std::size_t violations = 0;
  double worst = -INFINITY;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 2 + rng() % 9;
    auto p = normalized(random_probs(rng, n, 0.2));
    auto q = normalized(random_probs(rng, n, 0.0));
    auto rep = pinsker_check(p, q);
    violations += !rep.holds;
    worst = std::max(worst, rep.l1 - rep.sqrt_2kl);
  }
  return {violations == 0,
          fmt("10000 pairs, %zu violations, max l1 - sqrt(2KL) %.3g", violations, worst)};
}

Verdict c9_decoupling() {
  const std::size_t n = 1000;
  auto pair = build_decoupling_pair(4, 2);
  auto base = generate(pair.base, derive_seed(109, "acceptance/c9", 0), n);
  auto rl = generate(pair.rlvr_like, derive_seed(109, "acceptance/c9", 1), n);
  const auto base_cf = chain_closed_form(1, 1, 2);
  const auto rl_cf = chain_closed_form(4, 2, 1);
  const double d_token = token_entropy(rl) - token_entropy(base);
  const double d_answer = answer_entropy(rl.answers()) - answer_entropy(base.answers());
  // Chain models have identical per-step entropies in every sequence, so the
  // token entropy has zero variance; the base answer is a fair coin.
  std::size_t a0 = 0;
  for (const auto& s : base.sequences) a0 += s.answer == "a0";
  const double coin_z = std::abs(static_cast<double>(a0) - 0.5 * n) / std::sqrt(0.25 * n);
  const bool closed_form = std::abs(token_entropy(base) - base_cf.token_entropy) <= 1e-12 &&
                           std::abs(token_entropy(rl) - rl_cf.token_entropy) <= 1e-12 &&
                           answer_entropy(rl.answers()) == rl_cf.answer_entropy && coin_z <= 3.0;
  return {d_token > 0.0 && d_answer < 0.0 && closed_form,
          fmt("delta token entropy %+.4f (closed form %+.4f), delta answer entropy %+.4f "
              "(closed form %+.4f), base answer |z| %.2f",
              d_token, rl_cf.token_entropy - base_cf.token_entropy, d_answer,
              rl_cf.answer_entropy - base_cf.answer_entropy, coin_z)};
}

Verdict c10_accuracy_rows() {
  std::vector<SupportItem> items;
  auto add = [&](std::size_t count, bool b, bool r) {
    for (std::size_t i = 0; i < count; ++i) {
      items.push_back({"m" + std::to_string(items.size()), categorize_problem(b, r), b, r});
    }
  };
  add(173, true, true);
  add(22, true, false);
  add(0, false, true);
  add(77, false, false);
  auto rep = assemble_report(std::move(items));
  const double base = std::round(rep.base_accuracy * 1000.0) / 10.0;
  const double rl = std::round(rep.rlvr_accuracy * 1000.0) / 10.0;
  return {base == 71.7 && rl == 63.6,
          fmt("base %.1f%%, RLVR %.1f%% over %zu problems", base, rl, rep.total())};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every subcommand run twice through the CLI on the bundled configs.
Verdict c11_determinism() {
  const fs::path fixtures = RLVR_FIXTURE_DIR;
  const fs::path root = fs::temp_directory_path() / ("rlvr_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"tilt-sweep", "tilt_sweep.json"},   {"train", "train.json"},
      {"thm3-sweep", "thm3_sweep.json"},   {"entropy-probe", "entropy_probe.json"},
      {"analyze-logs", "analyze_logs.json"}, {"passk-curve", "passk_curve.json"}};
  std::size_t files = 0, differing = 0, failed_runs = 0;
  for (const auto& [cmd, config] : runs) {
    for (const char* tag : {"a", "b"}) {
      const auto out = root / tag / cmd;
      const std::string line = std::string("'") + RLVR_CLI_PATH + "' " + cmd + " -q --config '" +
                               (fixtures / config).string() + "' --out '" + out.string() + "'";
      const int status = std::system(line.c_str());
      failed_runs += !(WIFEXITED(status) && WEXITSTATUS(status) == 0);
    }
    for (const auto& e : fs::directory_iterator(root / "a" / cmd)) {
      ++files;
      differing += slurp(e.path()) != slurp(root / "b" / cmd / e.path().filename());
    }
  }
  const bool golden = slurp(root / "a" / "analyze-logs" / "support_report.csv") ==
                      slurp(fixtures / "support_report.golden.csv");
  fs::remove_all(root);
  return {failed_runs == 0 && differing == 0 && files > 0 && golden,
          fmt("%zu subcommands, %zu files compared, %zu differ, %zu failed runs, golden %s",
              runs.size(), files, differing, failed_runs, golden ? "match" : "MISMATCH")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"C1  masked outcomes stay at zero", c1_masked_outcomes},
      {"C2  tilt optimality", c2_tilt_optimality},
      {"C3  KL-free limit", c3_kl_free},
      {"C4  tail-mass bound", c4_tail_bound},
      {"C5  pass@k", c5_pass_at_k},
      {"C6  epsilon threshold", c6_epsilon},
      {"C7  entropy gap", c7_entropy_gap},
      {"C8  Pinsker", c8_pinsker},
      {"C9  entropy decoupling", c9_decoupling},
      {"C10 support accuracy rows", c10_accuracy_rows},
      {"C11 determinism and golden output", c11_determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
