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

#include "rlvr/rlvr.h"

#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "rlvr/distribution.hpp"
#include "rlvr/error.hpp"
#include "rlvr/experiment.hpp"
#include "rlvr/metrics.hpp"
#include "rlvr/support_analysis.hpp"
#include "rlvr/tilt.hpp"

struct rlvr_dist {
  rlvr::FiniteDistribution dist;
};

struct rlvr_config {
  rlvr::ExperimentConfig config;
};

struct rlvr_report {
  std::string summary;
  std::string out_dir;
};

namespace {

thread_local std::string g_last_error;

rlvr_status to_status(rlvr::ErrorCode code) { return static_cast<rlvr_status>(code); }

rlvr_status set_error(rlvr_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn and translates any exception into a status.
template <typename Fn>
rlvr_status guarded(Fn&& fn) {
  try {
    fn();
    return RLVR_OK;
  } catch (const rlvr::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(RLVR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(RLVR_INTERNAL, e.what());
  } catch (...) {
    return set_error(RLVR_INTERNAL, "unknown exception");
  }
}

rlvr_status null_arg(const char* what) {
  return set_error(RLVR_INVALID_HANDLE, std::string("null argument: ") + what);
}

rlvr::RewardTable rewards_for(const rlvr::FiniteDistribution& q, const int* rewards) {
  return rlvr::RewardTable(q.space(), std::vector<int>(rewards, rewards + q.size()));
}

rlvr_dist* wrap(rlvr::FiniteDistribution d) { return new rlvr_dist{std::move(d)}; }

}  // namespace

extern "C" {

const char* rlvr_last_error(void) { return g_last_error.c_str(); }

const char* rlvr_status_name(rlvr_status status) {
  // Names are string literals, so the view is NUL-terminated.
  return rlvr::error_code_name(static_cast<rlvr::ErrorCode>(status)).data();
}

int rlvr_status_exit_code(rlvr_status status) {
  return rlvr::exit_code_for(static_cast<rlvr::ErrorCode>(status));
}

const char* rlvr_version(void) { return "0.1.0"; }

rlvr_status rlvr_dist_create(const double* probs, size_t n, rlvr_dist** out) {
  if (!probs || !out) return null_arg("probs/out");
  return guarded([&] {
    *out = wrap(rlvr::FiniteDistribution(rlvr::OutcomeSpace::indexed(n),
                                         std::vector<double>(probs, probs + n)));
  });
}

rlvr_status rlvr_dist_normalize(const double* weights, size_t n, rlvr_dist** out) {
  if (!weights || !out) return null_arg("weights/out");
  return guarded([&] {
    *out = wrap(rlvr::normalize(std::span<const double>(weights, n),
                                rlvr::OutcomeSpace::indexed(n)));
  });
}

rlvr_status rlvr_dist_size(const rlvr_dist* d, size_t* out) {
  if (!d || !out) return null_arg("dist/out");
  *out = d->dist.size();
  return RLVR_OK;
}

rlvr_status rlvr_dist_probs(const rlvr_dist* d, double* buf, size_t cap) {
  if (!d || !buf) return null_arg("dist/buf");
  if (cap < d->dist.size()) return set_error(RLVR_INVALID_PARAMS, "buffer too small");
  for (size_t i = 0; i < d->dist.size(); ++i) buf[i] = d->dist[i];
  return RLVR_OK;
}

void rlvr_dist_free(rlvr_dist* d) { delete d; }

rlvr_status rlvr_tilt(const rlvr_dist* q, const int* rewards, double beta, rlvr_dist** out) {
  if (!q || !rewards || !out) return null_arg("q/rewards/out");
  return guarded([&] {
    *out = wrap(rlvr::exponential_tilt(q->dist, rewards_for(q->dist, rewards), beta));
  });
}

rlvr_status rlvr_kl_free_limit(const rlvr_dist* q, const int* rewards, rlvr_dist** out) {
  if (!q || !rewards || !out) return null_arg("q/rewards/out");
  return guarded(
      [&] { *out = wrap(rlvr::kl_free_limit(q->dist, rewards_for(q->dist, rewards))); });
}

rlvr_status rlvr_mixed_update(const rlvr_dist* tilted, const rlvr_dist* explore,
                              double gamma, rlvr_dist** out) {
  if (!tilted || !explore || !out) return null_arg("tilted/explore/out");
  return guarded([&] { *out = wrap(rlvr::mixed_update(tilted->dist, explore->dist, gamma)); });
}

rlvr_status rlvr_tail_mass_bound(double beta, double gamma, double tau, double delta,
                                 double* out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = rlvr::tail_mass_bound({beta, gamma, tau, delta}); });
}

rlvr_status rlvr_entropy(const rlvr_dist* p, double* out) {
  if (!p || !out) return null_arg("p/out");
  return guarded([&] { *out = rlvr::entropy(p->dist); });
}

rlvr_status rlvr_kl(const rlvr_dist* p, const rlvr_dist* q, double* out) {
  if (!p || !q || !out) return null_arg("p/q/out");
  return guarded([&] { *out = rlvr::kl(p->dist, q->dist); });
}

rlvr_status rlvr_total_variation(const rlvr_dist* p, const rlvr_dist* q, double* out) {
  if (!p || !q || !out) return null_arg("p/q/out");
  return guarded([&] { *out = rlvr::total_variation(p->dist, q->dist); });
}

rlvr_status rlvr_pass_at_k_exact(double p_correct, uint64_t k, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = rlvr::pass_at_k_exact(p_correct, k); });
}

rlvr_status rlvr_pass_at_k_estimate(uint64_t n, uint64_t c, uint64_t k, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = rlvr::pass_at_k_estimate(n, c, k); });
}

rlvr_status rlvr_epsilon_threshold(double zeta, uint64_t k, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = rlvr::epsilon_threshold(zeta, k); });
}

rlvr_status rlvr_perplexity(const double* logprobs, size_t n, double* out) {
  if (!out || (!logprobs && n > 0)) return null_arg("logprobs/out");
  return guarded([&] { *out = rlvr::perplexity(std::span<const double>(logprobs, n)); });
}

rlvr_status rlvr_categorize_completion(double q_prob, double pi_prob, double epsilon,
                                       rlvr_support_category* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = static_cast<rlvr_support_category>(
        rlvr::categorize_completion(q_prob, pi_prob, epsilon));
  });
}

rlvr_status rlvr_categorize_problem(int base_solved, int rlvr_solved,
                                    rlvr_support_category* out) {
  if (!out) return null_arg("out");
  *out = static_cast<rlvr_support_category>(
      rlvr::categorize_problem(base_solved != 0, rlvr_solved != 0));
  return RLVR_OK;
}

rlvr_status rlvr_kind_from_name(const char* name, rlvr_experiment_kind* out) {
  if (!name || !out) return null_arg("name/out");
  auto kind = rlvr::parse_kind(name);
  if (!kind) return set_error(RLVR_CONFIG_INVALID, std::string("unknown experiment ") + name);
  *out = static_cast<rlvr_experiment_kind>(*kind);
  return RLVR_OK;
}

rlvr_status rlvr_config_default(rlvr_experiment_kind kind, rlvr_config** out) {
  if (!out) return null_arg("out");
  if (kind < RLVR_TILT_SWEEP || kind > RLVR_PASSK_CURVE) {
    return set_error(RLVR_CONFIG_INVALID, "unknown experiment kind");
  }
  return guarded([&] {
    *out = new rlvr_config{rlvr::default_config(static_cast<rlvr::ExperimentKind>(kind))};
  });
}

rlvr_status rlvr_config_from_file(rlvr_experiment_kind kind, const char* path,
                                  rlvr_config** out) {
  if (!path || !out) return null_arg("path/out");
  if (kind < RLVR_TILT_SWEEP || kind > RLVR_PASSK_CURVE) {
    return set_error(RLVR_CONFIG_INVALID, "unknown experiment kind");
  }
  return guarded([&] {
    *out = new rlvr_config{rlvr::load_config(static_cast<rlvr::ExperimentKind>(kind), path)};
  });
}

rlvr_status rlvr_config_set_seed(rlvr_config* c, uint64_t seed) {
  if (!c) return null_arg("config");
  c->config.seed = seed;
  return RLVR_OK;
}

rlvr_status rlvr_config_set_output_dir(rlvr_config* c, const char* dir) {
  if (!c || !dir) return null_arg("config/dir");
  return guarded([&] { c->config.out_dir = dir; });
}

rlvr_status rlvr_config_set_strict(rlvr_config* c, int strict) {
  if (!c) return null_arg("config");
  c->config.strict = strict != 0;
  return RLVR_OK;
}

rlvr_status rlvr_config_set_param(rlvr_config* c, const char* key, const char* json_value) {
  if (!c || !key || !json_value) return null_arg("config/key/value");
  return guarded([&] {
    nlohmann::ordered_json value;
    try {
      value = nlohmann::ordered_json::parse(json_value);
    } catch (const nlohmann::json::parse_error&) {
      // Bare words such as group_mean are taken as strings.
      value = std::string(json_value);
    }
    rlvr::set_param(c->config, key, value);
  });
}

void rlvr_config_free(rlvr_config* c) { delete c; }

rlvr_status rlvr_run(const rlvr_config* c, rlvr_report** out) {
  if (!c || !out) return null_arg("config/out");
  return guarded([&] {
    auto result = rlvr::run(c->config);
    *out = new rlvr_report{result.summary.dump(2), result.out_dir.string()};
  });
}

const char* rlvr_report_summary(const rlvr_report* r) { return r ? r->summary.c_str() : ""; }

const char* rlvr_report_output_dir(const rlvr_report* r) {
  return r ? r->out_dir.c_str() : "";
}

void rlvr_report_free(rlvr_report* r) { delete r; }

}  // extern "C"
