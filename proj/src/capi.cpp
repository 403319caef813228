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


#include "diophlab/diophlab.h"

#include <memory>
#include <string>
#include <vector>

#include "diophlab/approx.hpp"
#include "diophlab/counting.hpp"
#include "diophlab/experiment.hpp"
#include "diophlab/lattice.hpp"
#include "diophlab/madsum.hpp"
#include "diophlab/ubiquity.hpp"

using namespace diophlab;

struct dl_context {
  std::string error;
  Precision prec;
  int threads = 1;
};

struct dl_subspace {
  AffineSubspaceSpec spec;
};

struct dl_psi {
  ApproxFunction psi;
};

struct dl_run {
  RunRecord record;
  std::string json;
};

struct dl_replay {
  ReplayVerdict verdict;
  dl_run rerun;
};

namespace {

template <class F>
dl_status guarded(dl_context* ctx, F&& fn) {
  if (ctx == nullptr) return DL_INVALID_ARGUMENT;
  ctx->error.clear();
  try {
    fn();
    return DL_OK;
  } catch (const Error& e) {
    ctx->error = e.what();
    return static_cast<dl_status>(e.code());
  } catch (const std::exception& e) {
    ctx->error = e.what();
    return DL_INTERNAL;
  }
}

void need(bool cond, const char* what) {
  if (!cond) fail(ErrorCode::kInvalidArgument, what);
}

SurdSum literal(const char* text) {
  need(text != nullptr, "null numeric literal");
  return ExactReal::parse(text).to_surd();
}

Rational rational_literal(const char* text) {
  ExactReal v = ExactReal::parse(text ? text : "");
  need(v.is_rational(), "expected a rational literal");
  return v.as_rational();
}

SurdVector literals(const char* const* v, int count) {
  need(count == 0 || v != nullptr, "null literal array");
  SurdVector out;
  for (int i = 0; i < count; ++i) out.push_back(literal(v[i]));
  return out;
}

Ball ball_of(const char* const* center, const char* radius, int n) {
  Ball b{literals(center, n), rational_literal(radius)};
  need(b.radius > 0, "radius must be positive");
  return b;
}

}  // namespace

extern "C" {

const char* dl_version(void) { return "0.1.0"; }

const char* dl_status_name(dl_status status) {
  return error_code_name(static_cast<ErrorCode>(status));
}

int dl_exit_code(dl_status status) { return exit_code_for(static_cast<ErrorCode>(status)); }

dl_status dl_context_new(dl_context** out) {
  if (out == nullptr) return DL_INVALID_ARGUMENT;
  *out = new (std::nothrow) dl_context();
  return *out ? DL_OK : DL_INTERNAL;
}

void dl_context_free(dl_context* ctx) { delete ctx; }

const char* dl_last_error(const dl_context* ctx) { return ctx ? ctx->error.c_str() : ""; }

dl_status dl_context_set_precision(dl_context* ctx, long bits, long max_bits) {
  return guarded(ctx, [&] {
    need(bits >= 16 && max_bits >= bits, "need 16 <= bits <= max_bits");
    ctx->prec = Precision{bits, max_bits};
  });
}

dl_status dl_context_set_threads(dl_context* ctx, int threads) {
  return guarded(ctx, [&] {
    need(threads >= 1, "threads must be positive");
    ctx->threads = threads;
  });
}

dl_status dl_subspace_new(dl_context* ctx, int d, int n, const char* const* tilt,
                          const char* const* shift, dl_subspace** out) {
  return guarded(ctx, [&] {
    need(out != nullptr, "null output");
    need(d >= 2 && n >= 1 && n < d, "need 1 <= n < d");
    SurdVector t = literals(tilt, n * (d - n));
    SurdMatrix a(n, SurdVector(d - n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d - n; ++j) a[i][j] = t[i * (d - n) + j];
    }
    *out = new dl_subspace{AffineSubspaceSpec(d, n, std::move(a), literals(shift, d - n))};
  });
}

dl_status dl_subspace_parse(dl_context* ctx, const char* text, dl_subspace** out) {
  return guarded(ctx, [&] {
    need(out != nullptr && text != nullptr, "null argument");
    *out = new dl_subspace{AffineSubspaceSpec::from_text(text)};
  });
}

void dl_subspace_free(dl_subspace* s) { delete s; }
int dl_subspace_dim(const dl_subspace* s) { return s ? s->spec.d() : 0; }
int dl_subspace_param_dim(const dl_subspace* s) { return s ? s->spec.n() : 0; }

dl_status dl_psi_power_log(dl_context* ctx, const char* c, const char* tau, const char* sigma,
                           dl_psi** out) {
  return guarded(ctx, [&] {
    need(out != nullptr, "null output");
    *out = new dl_psi{ApproxFunction::power_log(rational_literal(c), rational_literal(tau),
                                                rational_literal(sigma ? sigma : "0"))};
  });
}

void dl_psi_free(dl_psi* psi) { delete psi; }

dl_status dl_mad_sum(dl_context* ctx, int rows, int cols, const char* const* entries, int64_t J,
                     double* lo, double* hi) {
  return guarded(ctx, [&] {
    need(rows >= 1 && cols >= 1 && lo && hi, "bad arguments");
    SurdVector e = literals(entries, rows * cols);
    SurdMatrix a(rows, SurdVector(cols));
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) a[i][j] = e[i * cols + j];
    }
    Interval s = mad_sum(a, J, ctx->threads, ctx->prec);
    *lo = s.lo_down();
    *hi = s.hi_up();
  });
}

dl_status dl_count_exact(dl_context* ctx, const dl_subspace* s, int64_t q, const char* delta,
                         const char* const* center, const char* radius, uint64_t* count) {
  return guarded(ctx, [&] {
    need(s != nullptr && count != nullptr, "null argument");
    CountConfig cfg{s->spec, q, Real(literal(delta)), ball_of(center, radius, s->spec.n())};
    *count = count_exact(cfg, ctx->threads, kDefaultTestBudget, ctx->prec);
  });
}

dl_status dl_count_aggregate(dl_context* ctx, const dl_subspace* s, const dl_psi* psi, int64_t k,
                             int t, const char* const* center, const char* radius,
                             uint64_t* count, double* bound) {
  return guarded(ctx, [&] {
    need(s && psi && count && bound, "null argument");
    AggregateConfig cfg{s->spec, k, t, psi->psi, ball_of(center, radius, s->spec.n())};
    *count = count_aggregate(cfg, ctx->threads, kDefaultTestBudget, ctx->prec);
    *bound = theorem4_bound(k, t, psi->psi, cfg.ball.measure(), s->spec.d(), s->spec.n())
                 .lo_down();
  });
}

dl_status dl_solve_linear_forms(dl_context* ctx, int k, const char* const* beta,
                                const char* const* bounds, int64_t* x) {
  return guarded(ctx, [&] {
    need(k >= 1 && k <= 8 && x != nullptr, "bad arguments");
    SurdVector b = literals(beta, k * k);
    SurdVector c = literals(bounds, k);
    LinearFormsSystem sys;
    sys.beta.assign(k, std::vector<Real>(k));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) sys.beta[i][j] = Real(b[i * k + j]);
      sys.bounds.push_back(Real(c[i]));
    }
    SolveResult r = solve_linear_forms(sys, 10000000, {}, ctx->prec);
    for (int i = 0; i < k; ++i) x[i] = r.x[i];
  });
}

dl_status dl_rho(dl_context* ctx, const dl_psi* psi, int64_t q, int d, int n, double* out) {
  return guarded(ctx, [&] {
    need(psi && out && q >= 1, "bad arguments");
    *out = rho(BigInt(static_cast<long>(q)), psi->psi, d, n).approx();
  });
}

dl_status dl_min_k(dl_context* ctx, int n, int d, double* out) {
  return guarded(ctx, [&] {
    need(out != nullptr, "null output");
    *out = min_k(n, d).mid();
  });
}

dl_status dl_classify_series(dl_context* ctx, const dl_psi* psi, int d, int n, const char* s,
                             int* diverges) {
  return guarded(ctx, [&] {
    need(psi && diverges, "null argument");
    *diverges =
        divergence_classifier(psi->psi, d, n, rational_literal(s)) == SeriesVerdict::kDiverges;
  });
}

dl_status dl_first_approximation(dl_context* ctx, const dl_subspace* s, const dl_psi* psi,
                                 const char* const* x, int64_t Q, int64_t q_min,
                                 int64_t* first_q) {
  return guarded(ctx, [&] {
    need(s && psi && first_q, "null argument");
    ApproxVerdict v =
        is_approximable_upto(literals(x, s->spec.n()), s->spec, psi->psi, Q, q_min, ctx->prec);
    *first_q = v.first_q.value_or(0);
  });
}

void dl_run_options_init(dl_run_options* opts) {
  if (opts == nullptr) return;
  opts->subcommand = nullptr;
  opts->config_path = nullptr;
  opts->seed = 1;
  opts->threads = 1;
  opts->bits = 128;
  opts->budget = kDefaultTestBudget;
  opts->out_dir = "runs";
}

size_t dl_subcommand_count(void) { return subcommand_names().size(); }

const char* dl_subcommand_name(size_t i) {
  return i < subcommand_names().size() ? subcommand_names()[i].c_str() : nullptr;
}

dl_status dl_run_experiment(dl_context* ctx, const dl_run_options* opts, dl_run** out) {
  return guarded(ctx, [&] {
    need(opts && out && opts->subcommand && opts->config_path && opts->out_dir,
         "null argument");
    RunOptions o;
    o.subcommand = opts->subcommand;
    o.config_path = opts->config_path;
    o.seed = opts->seed;
    o.threads = opts->threads;
    o.bits = opts->bits;
    o.budget = opts->budget;
    o.out_dir = opts->out_dir;
    RunRecord r = run_experiment(o);
    std::string j = record_json(r);
    *out = new dl_run{std::move(r), std::move(j)};
  });
}

void dl_run_free(dl_run* run) { delete run; }
const char* dl_run_id(const dl_run* run) { return run ? run->record.run_id.c_str() : ""; }
int dl_run_pass(const dl_run* run) { return run && run->record.pass; }
int dl_run_exit_code(const dl_run* run) { return run ? run->record.exit_code : 3; }
const char* dl_run_summary(const dl_run* run) { return run ? run->record.summary.c_str() : ""; }
const char* dl_run_error(const dl_run* run) { return run ? run->record.error.c_str() : ""; }
const char* dl_run_record_json(const dl_run* run) { return run ? run->json.c_str() : ""; }
size_t dl_run_output_count(const dl_run* run) { return run ? run->record.outputs.size() : 0; }

const char* dl_run_output_file(const dl_run* run, size_t i) {
  return run && i < run->record.outputs.size() ? run->record.outputs[i].file.c_str() : nullptr;
}

const char* dl_run_output_sha256(const dl_run* run, size_t i) {
  return run && i < run->record.outputs.size() ? run->record.outputs[i].sha256.c_str() : nullptr;
}

dl_status dl_replay_run(dl_context* ctx, const char* out_dir, const char* run_id, int threads,
                        dl_replay** out) {
  return guarded(ctx, [&] {
    need(out_dir && run_id && out, "null argument");
    ReplayVerdict v = replay_run(out_dir, run_id, threads);
    dl_run rerun{v.rerun, record_json(v.rerun)};
    *out = new dl_replay{std::move(v), std::move(rerun)};
  });
}

void dl_replay_free(dl_replay* r) { delete r; }
int dl_replay_match(const dl_replay* r) { return r && r->verdict.match; }
size_t dl_replay_file_count(const dl_replay* r) { return r ? r->verdict.files.size() : 0; }

const char* dl_replay_file(const dl_replay* r, size_t i) {
  return r && i < r->verdict.files.size() ? r->verdict.files[i].file.c_str() : nullptr;
}

const char* dl_replay_expected(const dl_replay* r, size_t i) {
  return r && i < r->verdict.files.size() ? r->verdict.files[i].expected.c_str() : nullptr;
}

const char* dl_replay_actual(const dl_replay* r, size_t i) {
  return r && i < r->verdict.files.size() ? r->verdict.files[i].actual.c_str() : nullptr;
}

int dl_replay_file_match(const dl_replay* r, size_t i) {
  return r && i < r->verdict.files.size() && r->verdict.files[i].match;
}

const dl_run* dl_replay_rerun(const dl_replay* r) { return r ? &r->rerun : nullptr; }

}  // extern "C"
