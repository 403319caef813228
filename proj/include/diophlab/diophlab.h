// Copyright 2026 The diophlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to diophlab. Every object is an opaque handle owned by the
 * caller and released with its _free function. Functions return a
 * dl_status; on failure the message is available from dl_last_error on the
 * same context. Numeric literals are strings in the forms "p", "p/r",
 * "sqrt(D)" and "(p+q*sqrt(D))/r". */

#ifndef DIOPHLAB_DIOPHLAB_H_
#define DIOPHLAB_DIOPHLAB_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define DL_API __attribute__((visibility("default")))
#else
#define DL_API
#endif

typedef enum dl_status {
  DL_OK = 0,
  DL_INVALID_ARGUMENT = 1,
  DL_CONFIG = 2,
  DL_PRECISION_EXHAUSTED = 3,
  DL_BUDGET_EXCEEDED = 4,
  DL_DEGENERATE_TILT = 5,
  DL_RATIONAL_RESONANCE = 6,
  DL_DOMAIN = 7,
  DL_NOT_FOUND = 8,
  DL_DIGEST_MISMATCH = 9,
  DL_IO = 10,
  DL_SOLVER_INCOMPLETE = 11,
  DL_INTERNAL = 12
} dl_status;

typedef struct dl_context dl_context;
typedef struct dl_subspace dl_subspace;
typedef struct dl_psi dl_psi;
typedef struct dl_run dl_run;
typedef struct dl_replay dl_replay;

DL_API const char* dl_version(void);
DL_API const char* dl_status_name(dl_status status);
/* 0 pass, 1 verification failure, 2 config error, 3 budget or precision. */
DL_API int dl_exit_code(dl_status status);

DL_API dl_status dl_context_new(dl_context** out);
DL_API void dl_context_free(dl_context* ctx);
DL_API const char* dl_last_error(const dl_context* ctx);
/* Precision floor in bits (default 128) and escalation cap (default 4096). */
DL_API dl_status dl_context_set_precision(dl_context* ctx, long bits, long max_bits);
DL_API dl_status dl_context_set_threads(dl_context* ctx, int threads);

/* tilt holds n*(d-n) literals row by row, shift holds d-n literals. */
DL_API dl_status dl_subspace_new(dl_context* ctx, int d, int n, const char* const* tilt,
                                 const char* const* shift, dl_subspace** out);
DL_API dl_status dl_subspace_parse(dl_context* ctx, const char* text, dl_subspace** out);
DL_API void dl_subspace_free(dl_subspace* s);
DL_API int dl_subspace_dim(const dl_subspace* s);
DL_API int dl_subspace_param_dim(const dl_subspace* s);

/* psi(q) = c q^-tau log(q+1)^-sigma. */
DL_API dl_status dl_psi_power_log(dl_context* ctx, const char* c, const char* tau,
                                  const char* sigma, dl_psi** out);
DL_API void dl_psi_free(dl_psi* psi);

/* Certified enclosure [lo, hi] of the sum of 1/prod_u ||j . row_u(A)|| over
 * 0 < |j| <= J for the rows x cols matrix of literals. */
DL_API dl_status dl_mad_sum(dl_context* ctx, int rows, int cols, const char* const* entries,
                            int64_t J, double* lo, double* hi);

/* #{p in N^n : ||p^ A~|| < delta, |p - q x0| < q eta}. */
DL_API dl_status dl_count_exact(dl_context* ctx, const dl_subspace* s, int64_t q,
                                const char* delta, const char* const* center,
                                const char* radius, uint64_t* count);

/* Level count over q <= k^(t-1) with delta = psi(k^t)/2 and its bound. */
DL_API dl_status dl_count_aggregate(dl_context* ctx, const dl_subspace* s, const dl_psi* psi,
                                    int64_t k, int t, const char* const* center,
                                    const char* radius, uint64_t* count, double* bound);

/* A certified nonzero integer x with |beta_i . x| < C_i (i < k) and
 * |beta_k . x| <= C_k; beta is k*k literals row by row. */
DL_API dl_status dl_solve_linear_forms(dl_context* ctx, int k, const char* const* beta,
                                       const char* const* bounds, int64_t* x);

DL_API dl_status dl_rho(dl_context* ctx, const dl_psi* psi, int64_t q, int d, int n,
                        double* out);
DL_API dl_status dl_min_k(dl_context* ctx, int n, int d, double* out);

/* 1 when the series sum psi(q)^(d-n+s) q^(n-s) diverges, 0 otherwise. */
DL_API dl_status dl_classify_series(dl_context* ctx, const dl_psi* psi, int d, int n,
                                    const char* s, int* diverges);

/* First q in [q_min, Q] with ||q lift(x)|| < psi(q), or 0 if none. */
DL_API dl_status dl_first_approximation(dl_context* ctx, const dl_subspace* s,
                                        const dl_psi* psi, const char* const* x, int64_t Q,
                                        int64_t q_min, int64_t* first_q);

/* Experiments. out_dir receives <run_id>/ and ledger.jsonl. */
typedef struct dl_run_options {
  const char* subcommand;
  const char* config_path;
  uint64_t seed;
  int threads;
  long bits;
  uint64_t budget;
  const char* out_dir;
} dl_run_options;

DL_API void dl_run_options_init(dl_run_options* opts);
DL_API size_t dl_subcommand_count(void);
DL_API const char* dl_subcommand_name(size_t i);

/* DL_OK when the run executed, even if its verification failed. */
DL_API dl_status dl_run_experiment(dl_context* ctx, const dl_run_options* opts, dl_run** out);
DL_API void dl_run_free(dl_run* run);
DL_API const char* dl_run_id(const dl_run* run);
DL_API int dl_run_pass(const dl_run* run);
DL_API int dl_run_exit_code(const dl_run* run);
DL_API const char* dl_run_summary(const dl_run* run);
DL_API const char* dl_run_error(const dl_run* run);
DL_API const char* dl_run_record_json(const dl_run* run);
DL_API size_t dl_run_output_count(const dl_run* run);
DL_API const char* dl_run_output_file(const dl_run* run, size_t i);
DL_API const char* dl_run_output_sha256(const dl_run* run, size_t i);

/* threads <= 0 keeps the recorded thread count. */
DL_API dl_status dl_replay_run(dl_context* ctx, const char* out_dir, const char* run_id,
                               int threads, dl_replay** out);
DL_API void dl_replay_free(dl_replay* r);
DL_API int dl_replay_match(const dl_replay* r);
DL_API size_t dl_replay_file_count(const dl_replay* r);
DL_API const char* dl_replay_file(const dl_replay* r, size_t i);
DL_API const char* dl_replay_expected(const dl_replay* r, size_t i);
DL_API const char* dl_replay_actual(const dl_replay* r, size_t i);
DL_API int dl_replay_file_match(const dl_replay* r, size_t i);
DL_API const dl_run* dl_replay_rerun(const dl_replay* r);

#ifdef __cplusplus
}
#endif

#endif /* DIOPHLAB_DIOPHLAB_H_ */
