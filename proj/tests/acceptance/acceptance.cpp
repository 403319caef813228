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


// Acceptance report: one PASS/FAIL line per criterion. Tolerances, sample
// counts and runtime limits are pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "diophlab/approx.hpp"
#include "diophlab/counting.hpp"
#include "diophlab/exact_real.hpp"
#include "diophlab/experiment.hpp"
#include "diophlab/lattice.hpp"
#include "diophlab/madsum.hpp"
#include "diophlab/rng.hpp"
#include "diophlab/selberg.hpp"
#include "diophlab/ubiquity.hpp"

using namespace diophlab;
namespace fs = std::filesystem;

namespace {

constexpr uint64_t kSeed = 20260101;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SurdSum lit(const char* s) { return ExactReal::parse(s).to_surd(); }

AffineSubspaceSpec sqrt2_line() { return line_spec(lit("sqrt(2)")); }

// a + b sqrt(D) with distinct D per entry so that 1 and the entries of a row
// stay linearly independent over Q.
AffineSubspaceSpec random_quadratic_spec(Stream& s, int d, int n) {
  static const long kRadicands[] = {2, 3, 5, 6, 7, 10, 11};
  SurdMatrix tilt(n, SurdVector(d - n));
  int next = static_cast<int>(s.uniform_int(0, 6));
  for (auto& row : tilt) {
    for (auto& v : row) {
      Rational a(s.uniform_int(-8, 8), 4);
      Rational b(s.uniform_int(1, 3), s.uniform_int(1, 2));
      a.canonicalize();
      b.canonicalize();
      v = SurdSum(a) + SurdSum::scaled_sqrt(b, BigInt(kRadicands[next % 7]));
      ++next;
    }
  }
  SurdVector shift;
  for (int v = 0; v < d - n; ++v) shift.push_back(SurdSum(Rational(s.uniform_int(0, 7), 8)));
  return AffineSubspaceSpec(d, n, tilt, shift);
}

// 1. Selberg functions.
Outcome selberg_suite() {
  int cases = 0, ok = 0;
  for (Rational delta : {Rational(1, 20), Rational(1, 10), Rational(1, 5), Rational(3, 10)}) {
    for (int J : {4, 16, 64}) {
      ++cases;
      auto plus = TrigPolynomial::construct(delta, J, SelbergSign::kMajorant);
      auto minus = TrigPolynomial::construct(delta, J, SelbergSign::kMinorant);
      const bool b0 = plus.b0() == 2 * delta + Rational(1, J + 1) &&
                      minus.b0() == 2 * delta - Rational(1, J + 1);
      const bool bounds = plus.coefficient_contract_holds() && minus.coefficient_contract_holds();
      MajorizationReport rep = check_majorization(minus, plus, 10000, kSeed, 1024);
      if (b0 && bounds && rep.failures == 0 && rep.undecided == 0 && rep.tested >= 9990) ++ok;
    }
  }
  return {ok == cases, std::to_string(ok) + "/" + std::to_string(cases) + " cases"};
}

// 2. At most one point when q < 1/(2 eta).
Outcome single_point_clause() {
  uint64_t worst = 0;
  int ok = 0;
  for (uint64_t i = 0; i < 1000; ++i) {
    Stream s(kSeed + 2, i);
    const int d = 2 + static_cast<int>(s.uniform_int(0, 1));
    const int n = 1 + static_cast<int>(s.uniform_int(0, d - 2));
    AffineSubspaceSpec spec = random_quadratic_spec(s, d, n);
    const int64_t q = s.uniform_int(1, 10000);
    Rational eta(1, 2 * q + s.uniform_int(1, 100));
    SurdVector center;
    for (int j = 0; j < n; ++j) {
      center.push_back(SurdSum(eta + Rational(s.uniform_int(0, 1000), 1000) * (1 - 2 * eta)));
    }
    Rational delta(s.uniform_int(1, 499), 1000);
    uint64_t c = count_exact(CountConfig{spec, q, Real(delta), Ball{center, eta}});
    worst = std::max(worst, c);
    if (c <= 1) ++ok;
  }
  return {ok == 1000, std::to_string(ok) + "/1000 with count <= 1, max " + std::to_string(worst)};
}

// 3. Counts below the bound with C fitted once per tilt.
Outcome lemma3_dominance() {
  const std::vector<int64_t> fit_grid = {8, 16, 32, 64, 128, 256};
  int ok = 0;
  std::string failures;
  for (uint64_t i = 0; i < 50; ++i) {
    Stream s(kSeed + 3, i);
    const int d = 2 + static_cast<int>(s.uniform_int(0, 1));
    const int n = 1 + static_cast<int>(s.uniform_int(0, d - 2));
    AffineSubspaceSpec spec = random_quadratic_spec(s, d, n);
    const double omega = 1.05 * (d - n);
    const double c = lemma3_constant(fit_sum_constant(spec.tilt(), omega, n, fit_grid).c, d, n);
    const int64_t q = s.uniform_int(1, n == 1 ? 10000 : 2000);
    Rational eta(s.uniform_int(2, 25), 100);
    SurdVector center;
    for (int j = 0; j < n; ++j) {
      center.push_back(SurdSum(eta + Rational(s.uniform_int(0, 1000), 1000) * (1 - 2 * eta)));
    }
    Rational delta(s.uniform_int(1, 50), 1000);
    const uint64_t count = count_exact(CountConfig{spec, q, Real(delta), Ball{center, eta}});
    Rational measure = 1;
    for (int j = 0; j < n; ++j) measure *= 2 * eta;
    Interval bound = lemma3_bound(q, Real(delta), measure, omega, c, d, n);
    const double margin = bound.lo_down() - static_cast<double>(count);
    if (margin > 0) {
      ++ok;
    } else {
      failures += " #" + std::to_string(i) + " margin " + fmt("%.6g", margin);
    }
  }
  return {ok >= 48, std::to_string(ok) + "/50 positive margin (need 48)" + failures};
}

// 4. Aggregate counts on the k = 45 instance.
Outcome theorem4_instance() {
  const int64_t k = 45;
  const double kmin = min_k(1, 2).hi_up();
  AffineSubspaceSpec line = sqrt2_line();
  ApproxFunction psi = ApproxFunction::power(Rational(1, 2));
  Ball unit{{SurdSum(Rational(1, 2))}, Rational(1, 2)};
  // q <= k^(t-1) <= 91125 for t <= 4.
  std::vector<bool> pass;
  std::string counts;
  for (int t = 1; t <= 4; ++t) {
    const uint64_t c = count_aggregate(AggregateConfig{line, k, t, psi, unit});
    const double b = theorem4_bound(k, t, psi, Rational(1), 2, 1).lo_down();
    pass.push_back(static_cast<double>(c) < b);
    counts += " t=" + std::to_string(t) + ":" + std::to_string(c) + "<" + fmt("%.4g", b);
  }
  int t0 = -1;
  for (int t = 4; t >= 1 && pass[t - 1]; --t) t0 = t;
  const int kRecordedT0 = 1;
  return {k > kmin && t0 == kRecordedT0, "t0 = " + std::to_string(t0) + counts};
}

// 5. One constant per matrix on the full grid.
Outcome mad_sum_growth() {
  std::vector<int64_t> fit, check;
  for (int e = 3; e <= 10; ++e) fit.push_back(int64_t(1) << e);
  for (int e = 3; e <= 14; ++e) check.push_back(int64_t(1) << e);
  bool all = true;
  std::string detail;
  for (const char* entry : {"(1+sqrt(5))/2", "sqrt(2)"}) {
    SurdMatrix a = {{lit(entry)}};
    SumConstantFit f = fit_sum_constant(a, 1.05, 1, fit);
    auto rows = check_sum_bound(a, 1.05, 1, f.c, check);
    size_t ok = 0;
    for (const auto& r : rows) ok += r.ok;
    all = all && ok == rows.size();
    detail += std::string(" ") + entry + ": C=" + fmt("%.4f", f.c) + " " + std::to_string(ok) + "/" +
              std::to_string(rows.size());
  }
  return {all, detail.substr(1)};
}

// 6. Solver output against exhaustive search.
Outcome solver_soundness() {
  int ok = 0;
  for (uint64_t i = 0; i < 1000; ++i) {
    const int k = 1 + static_cast<int>(i % 4);
    LinearFormsSystem sys = random_certified_system(kSeed + 6, i, k, 6);
    if (check_determinant(sys).status != DetStatus::kCertified) continue;
    SolveResult r = solve_linear_forms(sys);
    auto oracle = box_solutions(sys, solution_box_radius(sys));
    const bool found = std::find(oracle.begin(), oracle.end(), r.x) != oracle.end();
    if (sys.satisfied_by(r.x) && found) ++ok;
  }
  return {ok == 1000, std::to_string(ok) + "/1000 certified and matched"};
}

// 7. Covering witnesses.
Outcome containment() {
  AffineSubspaceSpec line = sqrt2_line();
  ApproxFunction psi = ApproxFunction::power(Rational(1, 2));
  int ok = 0;
  for (uint64_t i = 0; i < 1000; ++i) {
    SurdVector x = sample_point(kSeed + 7, i, 1000, 1).to_surd();
    CoveringWitness w = covering_witness(x, 1000, psi, line);
    if (w.closeness_ok && w.radius_ok && w.height_ok) ++ok;
  }
  return {ok == 1000, std::to_string(ok) + "/1000 witnesses valid"};
}

// 8. Covered fraction at two consecutive levels.
Outcome ubiquity_cover() {
  AffineSubspaceSpec line = sqrt2_line();
  ApproxFunction psi = ApproxFunction::power(Rational(1, 2));
  Ball unit{{SurdSum(Rational(1, 2))}, Rational(1, 2)};
  CoverOptions opts;
  opts.samples = 10000;
  opts.seed = kSeed + 8;
  CoverReport a = covering_fraction(unit, 45, 2, psi, line, opts);
  CoverReport b = covering_fraction(unit, 45, 3, psi, line, opts);
  const double kMaxHalfWidth = 0.02;
  const double kStability = 2.0;
  const bool positive = a.fraction > 0 && b.fraction > 0;
  const bool stable = positive && std::max(a.fraction, b.fraction) <=
                                      kStability * std::min(a.fraction, b.fraction);
  const bool tight = a.half_width < kMaxHalfWidth && b.half_width < kMaxHalfWidth;
  return {positive && stable && tight, "t=2: " + fmt("%.4f", a.fraction) + " +- " +
                                           fmt("%.4f", a.half_width) + ", t=3: " +
                                           fmt("%.4f", b.fraction) + " +- " + fmt("%.4f", b.half_width)};
}

// 9. Measure of approximable points on the divergent instance.
Outcome divergence_measure() {
  AffineSubspaceSpec line = sqrt2_line();
  MadDiagnostics diag = estimate_exponent(line.tilt(), 10000);
  const bool exponent_ok = std::fabs(diag.fitted_omega - 1.0) <= 0.1 && diag.fitted_omega < 2;
  ApproxFunction psi = ApproxFunction::power(Rational(1, 2));
  auto rows = empirical_measure(line, psi, {1000, 10000, 100000}, 1000, kSeed + 9, 1, 500);
  bool monotone = true;
  for (size_t i = 1; i < rows.size(); ++i) monotone = monotone && rows[i].hits >= rows[i - 1].hits;
  monotone = monotone && rows.back().hits > rows.front().hits;
  const bool final_ok = rows.back().fraction >= 0.9;
  std::string detail = "omega_hat " + fmt("%.4f", diag.fitted_omega) + ", fractions";
  for (const auto& r : rows) detail += " " + fmt("%.3f", r.fraction);
  return {exponent_ok && monotone && final_ok, detail};
}

// 10. Box-counting slopes.
Outcome dimension() {
  const double kTol = 0.1;
  DimensionOptions sub;
  sub.scale_lo = 4;
  sub.scale_hi = 24;
  sub.fit_lo = 10;
  sub.fit_hi = 24;
  DimensionEstimate a = box_dimension(sqrt2_line(), Rational(4, 5), sub);
  DimensionOptions line;
  line.scale_lo = 8;
  line.scale_hi = 40;
  line.fit_lo = 16;
  line.fit_hi = 40;
  DimensionEstimate b = box_dimension_line(Rational(3), line);
  const bool ok = std::fabs(a.slope - 2.0 / 3) <= kTol && std::fabs(b.slope - 0.5) <= kTol;
  return {ok, "subspace " + fmt("%.4f", a.slope) + " vs 0.6667, line " + fmt("%.4f", b.slope) +
                  " vs 0.5"};
}

// 11. Classifier against condensation.
Outcome series() {
  const int d = 2, n = 1;
  const Rational s(1);
  std::vector<std::pair<ApproxFunction, int>> inst;  // expected: 1 diverges, 0 converges, -1 any
  inst.push_back({ApproxFunction::power(Rational(1, 2)), 1});
  for (uint64_t i = 0; i < 50; ++i) {
    Stream st(kSeed + 11, i);
    Rational tau(st.uniform_int(0, 12), st.uniform_int(1, 4));
    Rational sigma(st.uniform_int(0, 8), 4);
    Rational c(st.uniform_int(1, 8), st.uniform_int(1, 4));
    tau.canonicalize();
    sigma.canonicalize();
    c.canonicalize();
    inst.push_back({ApproxFunction::power_log(c, tau, sigma), -1});
  }
  for (Rational eps : {Rational(1, 100), Rational(1, 20), Rational(1, 4), Rational(1)}) {
    inst.push_back({cantelli_function(d, n, s, eps), 0});
  }
  size_t agree = 0;
  bool expected = true;
  for (const auto& [psi, want] : inst) {
    SeriesVerdict v = divergence_classifier(psi, d, n, s);
    CondensationReport rep = condensation_check(psi, d, n, s, 2, 64);
    if (rep.verdict && *rep.verdict == v) ++agree;
    if (want == 1 && v != SeriesVerdict::kDiverges) expected = false;
    if (want == 0 && v != SeriesVerdict::kConverges) expected = false;
  }
  return {agree == inst.size() && expected,
          std::to_string(agree) + "/" + std::to_string(inst.size()) + " agree"};
}

// 12. Every shipped config, run at 1 thread and replayed at 4.
Outcome determinism() {
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"mad-estimate", "mad_estimate_golden"},   {"mad-sum", "mad_sum_golden"},
      {"selberg-check", "selberg"},              {"count-verify", "count_k45"},
      {"minkowski-solve", "minkowski_random"},   {"cover-check", "cover_k45"},
      {"ubiquity-verify", "ubiquity_k45"},  {"approx-measure", "measure_divergent"},
      {"dimension", "dimension_subspace"},       {"classify-series", "series"},
  };
  const fs::path out = fs::temp_directory_path() / "diophlab_acceptance";
  fs::remove_all(out);
  size_t ok = 0;
  std::string bad;
  for (const auto& [sub, name] : runs) {
    RunOptions o;
    o.subcommand = sub;
    o.config_path = std::string(DIOPHLAB_CONFIG_DIR) + "/" + name + ".ini";
    o.out_dir = out.string();
    o.threads = 1;
    RunRecord r = run_experiment(o);
    ReplayVerdict v = replay_run(o.out_dir, r.run_id, 4);
    if (r.exit_code == 0 && v.match) {
      ++ok;
    } else {
      bad += " " + sub;
    }
  }
  fs::remove_all(out);
  return {ok == runs.size(), std::to_string(ok) + "/" + std::to_string(runs.size()) +
                                 " subcommands bit-identical" + bad};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all = {
      {1, "selberg contract", 60, selberg_suite},
      {2, "single-point clause", 60, single_point_clause},
      {3, "count bound dominance", 600, lemma3_dominance},
      {4, "aggregate k=45", 900, theorem4_instance},
      {5, "mad-sum growth", 300, mad_sum_growth},
      {6, "minkowski soundness", 300, solver_soundness},
      {7, "containment", 600, containment},
      {8, "ubiquity covering", 600, ubiquity_cover},
      {9, "divergence measure", 1200, divergence_measure},
      {10, "dimension", 1200, dimension},
      {11, "series classifier", 600, series},
      {12, "determinism", 3600, determinism},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && secs < c.limit_s;
    if (!pass) ++failed;
    std::printf("%s %2d %-20s %s (%.1fs, limit %.0fs)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.limit_s);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
