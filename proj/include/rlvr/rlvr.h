/* Copyright 2026 The RLVR Lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the RLVR lab library.
 *
 * Every function returns an rlvr_status. On failure, rlvr_last_error() holds
 * a message for the calling thread until the next failing call. Handles are
 * opaque and owned by the caller; release them with the matching _free
 * function (passing NULL is a no-op). Outputs are only written on success.
 */

#ifndef RLVR_RLVR_H_
#define RLVR_RLVR_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RLVR_API __declspec(dllexport)
#else
#define RLVR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rlvr_status {
  RLVR_OK = 0,
  RLVR_INVALID_SPACE = 1,
  RLVR_INVALID_DISTRIBUTION = 2,
  RLVR_INVALID_REWARD = 3,
  RLVR_ALL_ZERO_WEIGHTS = 4,
  RLVR_NEGATIVE_WEIGHT = 5,
  RLVR_NON_FINITE_WEIGHT = 6,
  RLVR_SPACE_MISMATCH = 7,
  RLVR_EPSILON_OUT_OF_RANGE = 8,
  RLVR_INVALID_PARAMS = 9,
  RLVR_NO_CORRECT_MASS = 10,
  RLVR_GAMMA_OUT_OF_RANGE = 11,
  RLVR_SPACE_TOO_LARGE = 12,
  RLVR_INFEASIBLE_TARGET = 13,
  RLVR_EMPTY_SUPPORT = 14,
  RLVR_ABSOLUTE_CONTINUITY_VIOLATION = 15,
  RLVR_K_EXCEEDS_N = 16,
  RLVR_EMPTY_SEQUENCE = 17,
  RLVR_POSITIVE_LOGPROB = 18,
  RLVR_INVALID_MODEL = 19,
  RLVR_EMPTY_BATCH = 20,
  RLVR_PROBLEM_SET_MISMATCH = 21,
  RLVR_CONFIG_INVALID = 22,
  RLVR_IO_FAILURE = 23,
  RLVR_PARSE_ERROR = 24,
  RLVR_SCHEMA_VIOLATION = 25,
  RLVR_INVARIANT_VIOLATION = 26,
  RLVR_INVALID_HANDLE = 27,
  RLVR_INTERNAL = 28
} rlvr_status;

typedef enum rlvr_experiment_kind {
  RLVR_TILT_SWEEP = 0,
  RLVR_TRAIN = 1,
  RLVR_THM3_SWEEP = 2,
  RLVR_ENTROPY_PROBE = 3,
  RLVR_ANALYZE_LOGS = 4,
  RLVR_PASSK_CURVE = 5
} rlvr_experiment_kind;

typedef enum rlvr_support_category {
  RLVR_PRESERVATION = 0,
  RLVR_SHRINKAGE = 1,
  RLVR_EXPANSION = 2,
  RLVR_OUT_OF_SUPPORT = 3
} rlvr_support_category;

typedef struct rlvr_dist rlvr_dist;     /* distribution over y1..yn */
typedef struct rlvr_config rlvr_config; /* experiment configuration */
typedef struct rlvr_report rlvr_report; /* result of rlvr_run */

RLVR_API const char* rlvr_last_error(void);
RLVR_API const char* rlvr_status_name(rlvr_status status);
/* 0 ok, 2 configuration, 3 input, 4 invariant violation. */
RLVR_API int rlvr_status_exit_code(rlvr_status status);
RLVR_API const char* rlvr_version(void);

/* Distributions. Probabilities must sum to 1 within 1e-12. */
RLVR_API rlvr_status rlvr_dist_create(const double* probs, size_t n, rlvr_dist** out);
RLVR_API rlvr_status rlvr_dist_normalize(const double* weights, size_t n, rlvr_dist** out);
RLVR_API rlvr_status rlvr_dist_size(const rlvr_dist* d, size_t* out);
/* Copies size() probabilities into buf, which must hold at least cap. */
RLVR_API rlvr_status rlvr_dist_probs(const rlvr_dist* d, double* buf, size_t cap);
RLVR_API void rlvr_dist_free(rlvr_dist* d);

/* Updates. rewards has one 0/1 entry per outcome. */
RLVR_API rlvr_status rlvr_tilt(const rlvr_dist* q, const int* rewards, double beta,
                               rlvr_dist** out);
RLVR_API rlvr_status rlvr_kl_free_limit(const rlvr_dist* q, const int* rewards,
                                        rlvr_dist** out);
RLVR_API rlvr_status rlvr_mixed_update(const rlvr_dist* tilted, const rlvr_dist* explore,
                                       double gamma, rlvr_dist** out);
RLVR_API rlvr_status rlvr_tail_mass_bound(double beta, double gamma, double tau,
                                          double delta, double* out);

/* Metrics. */
RLVR_API rlvr_status rlvr_entropy(const rlvr_dist* p, double* out);
RLVR_API rlvr_status rlvr_kl(const rlvr_dist* p, const rlvr_dist* q, double* out);
RLVR_API rlvr_status rlvr_total_variation(const rlvr_dist* p, const rlvr_dist* q,
                                          double* out);
RLVR_API rlvr_status rlvr_pass_at_k_exact(double p_correct, uint64_t k, double* out);
RLVR_API rlvr_status rlvr_pass_at_k_estimate(uint64_t n, uint64_t c, uint64_t k,
                                             double* out);
RLVR_API rlvr_status rlvr_epsilon_threshold(double zeta, uint64_t k, double* out);
RLVR_API rlvr_status rlvr_perplexity(const double* logprobs, size_t n, double* out);
RLVR_API rlvr_status rlvr_categorize_completion(double q_prob, double pi_prob,
                                                double epsilon,
                                                rlvr_support_category* out);
RLVR_API rlvr_status rlvr_categorize_problem(int base_solved, int rlvr_solved,
                                             rlvr_support_category* out);

/* Experiments. Parameter values are JSON text, e.g. "[0, 1, 10]". */
RLVR_API rlvr_status rlvr_kind_from_name(const char* name, rlvr_experiment_kind* out);
RLVR_API rlvr_status rlvr_config_default(rlvr_experiment_kind kind, rlvr_config** out);
RLVR_API rlvr_status rlvr_config_from_file(rlvr_experiment_kind kind, const char* path,
                                           rlvr_config** out);
RLVR_API rlvr_status rlvr_config_set_seed(rlvr_config* c, uint64_t seed);
RLVR_API rlvr_status rlvr_config_set_output_dir(rlvr_config* c, const char* dir);
RLVR_API rlvr_status rlvr_config_set_strict(rlvr_config* c, int strict);
RLVR_API rlvr_status rlvr_config_set_param(rlvr_config* c, const char* key,
                                           const char* json_value);
RLVR_API void rlvr_config_free(rlvr_config* c);

/* Runs the experiment. On RLVR_INVARIANT_VIOLATION the outputs have still
 * been written but no report is returned. */
RLVR_API rlvr_status rlvr_run(const rlvr_config* c, rlvr_report** out);
/* summary.json contents; valid until the report is freed. */
RLVR_API const char* rlvr_report_summary(const rlvr_report* r);
RLVR_API const char* rlvr_report_output_dir(const rlvr_report* r);
RLVR_API void rlvr_report_free(rlvr_report* r);

#ifdef __cplusplus
}
#endif

#endif /* RLVR_RLVR_H_ */
