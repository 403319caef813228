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


/* Exercises the shared library through its C interface only. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "diophlab/diophlab.h"

static int failures = 0;

#define EXPECT(cond)                                             \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                \
    }                                                            \
  } while (0)

int main(int argc, char** argv) {
  if (argc != 3) {
    fprintf(stderr, "usage: capi_smoke <config> <out_dir>\n");
    return 2;
  }
  dl_context* ctx = NULL;
  EXPECT(dl_context_new(&ctx) == DL_OK);
  EXPECT(strlen(dl_version()) > 0);
  EXPECT(strcmp(dl_status_name(DL_DOMAIN), dl_status_name(DL_OK)) != 0);
  EXPECT(dl_exit_code(DL_OK) == 0);
  EXPECT(dl_exit_code(DL_CONFIG) == 2);
  EXPECT(dl_exit_code(DL_BUDGET_EXCEEDED) == 3);

  const char* tilt[] = {"sqrt(2)"};
  const char* shift[] = {"0"};
  dl_subspace* line = NULL;
  EXPECT(dl_subspace_new(ctx, 2, 1, tilt, shift, &line) == DL_OK);
  EXPECT(dl_subspace_dim(line) == 2);
  EXPECT(dl_subspace_param_dim(line) == 1);
  const char* zero_tilt[] = {"0"};
  dl_subspace* flat = NULL;
  EXPECT(dl_subspace_new(ctx, 2, 1, zero_tilt, shift, &flat) == DL_OK);

  dl_psi* psi = NULL;
  EXPECT(dl_psi_power_log(ctx, "1", "1/2", "0", &psi) == DL_OK);
  EXPECT(dl_psi_power_log(ctx, "1", "oops", "0", &psi) != DL_OK);
  EXPECT(strlen(dl_last_error(ctx)) > 0);

  const char* center[] = {"1/2"};
  uint64_t count = 0;
  EXPECT(dl_count_exact(ctx, line, 50, "1/2", center, "1/5", &count) == DL_OK);
  EXPECT(count == 19);
  double bound = 0;
  EXPECT(dl_count_aggregate(ctx, line, psi, 45, 2, center, "1/2", &count, &bound) == DL_OK);
  EXPECT(count == 45);
  EXPECT(fabs(bound - 10935) < 1e-6);

  const char* beta[] = {"1", "-sqrt(2)", "0", "1"};
  const char* bounds[] = {"1/10", "10"};
  int64_t x[2] = {0, 0};
  EXPECT(dl_solve_linear_forms(ctx, 2, beta, bounds, x) == DL_OK);
  EXPECT(x[0] != 0 || x[1] != 0);
  EXPECT(fabs((double)x[0] - sqrt(2.0) * (double)x[1]) < 0.1);
  EXPECT(x[1] <= 10 && x[1] >= -10);
  const char* tight[] = {"1/10", "1"};
  EXPECT(dl_solve_linear_forms(ctx, 2, beta, tight, x) == DL_DOMAIN);

  double v = 0;
  EXPECT(dl_rho(ctx, psi, 100, 2, 1, &v) == DL_OK);
  EXPECT(fabs(v - 0.002) < 1e-12);
  EXPECT(dl_min_k(ctx, 1, 2, &v) == DL_OK);
  EXPECT(fabs(v - 44.0908) < 1e-3);
  EXPECT(dl_min_k(ctx, 2, 2, &v) != DL_OK);

  int diverges = -1;
  EXPECT(dl_classify_series(ctx, psi, 2, 1, "1", &diverges) == DL_OK);
  EXPECT(diverges == 1);

  const char* entries[] = {"(1+sqrt(5))/2"};
  double lo = 0, hi = 0;
  EXPECT(dl_mad_sum(ctx, 1, 1, entries, 64, &lo, &hi) == DL_OK);
  EXPECT(lo > 0 && lo <= hi);
  const char* rational[] = {"1/3"};
  EXPECT(dl_mad_sum(ctx, 1, 1, rational, 5, &lo, &hi) == DL_RATIONAL_RESONANCE);

  const char* pt[] = {"1/3"};
  int64_t first = -1;
  EXPECT(dl_first_approximation(ctx, line, psi, pt, 100, 1, &first) == DL_OK);
  EXPECT(first >= 1);
  /* Zero tilt: every p/q in the closed unit interval counts. */
  EXPECT(dl_count_aggregate(ctx, flat, psi, 45, 2, center, "1/2", &count, &bound) == DL_OK);
  EXPECT(count == 45 * 46 / 2 + 45);

  EXPECT(dl_subcommand_count() == 10);
  dl_run_options opts;
  dl_run_options_init(&opts);
  opts.subcommand = "minkowski-solve";
  opts.config_path = argv[1];
  opts.out_dir = argv[2];
  dl_run* run = NULL;
  EXPECT(dl_run_experiment(ctx, &opts, &run) == DL_OK);
  if (run) {
    EXPECT(dl_run_pass(run) == 1);
    EXPECT(dl_run_exit_code(run) == 0);
    EXPECT(strlen(dl_run_id(run)) == 16);
    EXPECT(dl_run_output_count(run) >= 2);
    EXPECT(strlen(dl_run_output_sha256(run, 0)) == 64);
    dl_replay* rep = NULL;
    EXPECT(dl_replay_run(ctx, argv[2], dl_run_id(run), 2, &rep) == DL_OK);
    if (rep) {
      EXPECT(dl_replay_match(rep) == 1);
      EXPECT(dl_replay_file_count(rep) == dl_run_output_count(run));
      EXPECT(strcmp(dl_replay_expected(rep, 0), dl_replay_actual(rep, 0)) == 0);
      EXPECT(strcmp(dl_run_id(dl_replay_rerun(rep)), dl_run_id(run)) == 0);
      dl_replay_free(rep);
    }
    dl_run_free(run);
  }
  dl_replay* missing = NULL;
  EXPECT(dl_replay_run(ctx, argv[2], "ffffffffffffffff", 1, &missing) == DL_NOT_FOUND);

  dl_subspace_free(line);
  dl_subspace_free(flat);
  dl_psi_free(psi);
  dl_context_free(ctx);
  if (failures == 0) printf("capi smoke: ok\n");
  return failures == 0 ? 0 : 1;
}
