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


#include <cmath>

#include "diophlab/approx.hpp"
#include "diophlab/error.hpp"
#include "diophlab/exact_real.hpp"
#include "diophlab/rng.hpp"
#include "doctest.h"

using namespace diophlab;

namespace {

SurdSum lit(const char* s) { return ExactReal::parse(s).to_surd(); }

long double frac_dist(long double v) { return std::fabs(v - std::nearbyint(v)); }

// First q in [q_min, Q] with max(||q x||, ||q (a0 + a x)||) < psi(q) on the
// line y = a x + a0, in long double. `tie` is set when a comparison falls
// within 1e-11 of the threshold.
std::optional<int64_t> brute_first_q(long double x, long double a, long double a0,
                                     long double (*psi)(int64_t), int64_t q_min, int64_t Q,
                                     bool* tie) {
  for (int64_t q = q_min; q <= Q; ++q) {
    const long double t = psi(q);
    const long double d1 = frac_dist(q * x);
    const long double d2 = frac_dist(q * (a0 + a * x));
    if (std::fabs(d1 - t) < 1e-11L || std::fabs(d2 - t) < 1e-11L) *tie = true;
    if (d1 < t && d2 < t) return q;
  }
  return std::nullopt;
}

long double psi_inv_sqrt(int64_t q) { return 1.0L / std::sqrt(static_cast<long double>(q)); }
long double psi_flat(int64_t) { return 0.49L; }
long double psi_tiny(int64_t) { return 1e-9L; }

}  // namespace

TEST_CASE("scans against brute force") {
  AffineSubspaceSpec line = line_spec(lit("sqrt(2)"), lit("1/5"));
  const long double a = std::sqrt(2.0L);
  struct Case {
    ApproxFunction psi;
    long double (*oracle)(int64_t);
  };
  std::vector<Case> cases = {
      {ApproxFunction::power(Rational(1, 2)), psi_inv_sqrt},
      {ApproxFunction::power_log(Rational(49, 100), Rational(0)), psi_flat},
      {ApproxFunction::power_log(Rational(1, 1000000000), Rational(0)), psi_tiny},
  };
  for (const auto& c : cases) {
    ApproxScanner scanner(line, c.psi, 400, 3);
    int found = 0;
    for (uint64_t i = 0; i < 300; ++i) {
      DyadicPoint u = sample_point(5, i, 300, 1);
      bool tie = false;
      auto want = brute_first_q(u.approx(0), a, 0.2L, c.oracle, 3, 400, &tie);
      if (tie) continue;
      ApproxVerdict v = scanner.scan(u.to_surd());
      CHECK(v.first_q == want);
      if (want) ++found;
      if (i < 20) CHECK(is_approximable_upto(u.to_surd(), line, c.psi, 400, 3).first_q == v.first_q);
    }
    if (c.oracle == psi_flat) CHECK(found >= 295);
    if (c.oracle == psi_tiny) CHECK(found == 0);
  }
}

TEST_CASE("empirical measure") {
  AffineSubspaceSpec line = line_spec(lit("sqrt(2)"), lit("1/5"));
  ApproxFunction psi = ApproxFunction::power(Rational(1, 2));
  auto rows = empirical_measure(line, psi, {10, 100, 1000}, 400, 9, 1, 2);
  REQUIRE(rows.size() == 3);
  const long double a = std::sqrt(2.0L);
  std::vector<uint64_t> hits(3);
  for (uint64_t i = 0; i < 400; ++i) {
    bool tie = false;
    auto q = brute_first_q(sample_point(9, i, 400, 1).approx(0), a, 0.2L, psi_inv_sqrt, 2, 1000, &tie);
    REQUIRE(!tie);
    if (!q) continue;
    if (*q <= 10) ++hits[0];
    if (*q <= 100) ++hits[1];
    ++hits[2];
  }
  for (size_t g = 0; g < 3; ++g) CHECK(rows[g].hits == hits[g]);
  CHECK(rows[2].fraction >= rows[0].fraction);
  auto threaded = empirical_measure(line, psi, {10, 100, 1000}, 400, 9, 4, 2);
  CHECK(threaded[2].hits == rows[2].hits);
  CHECK(measure_csv(rows).rfind("Q,", 0) == 0);
}

TEST_CASE("series classifier") {
  const Rational one(1);
  // Harmonic: psi = q^-1/2, d = 2, n = 1, s = 1 gives sum 1/q.
  CHECK(divergence_classifier(ApproxFunction::power(Rational(1, 2)), 2, 1, one) ==
        SeriesVerdict::kDiverges);
  CHECK(divergence_classifier(ApproxFunction::power(Rational(1)), 2, 1, one) ==
        SeriesVerdict::kConverges);
  // Threshold tau for s = 1/2 is 1.
  CHECK(divergence_classifier(ApproxFunction::power(Rational(1)), 2, 1, Rational(1, 2)) ==
        SeriesVerdict::kDiverges);
  CHECK(divergence_classifier(ApproxFunction::power(Rational(101, 100)), 2, 1, Rational(1, 2)) ==
        SeriesVerdict::kConverges);
  // Logarithmic factors decide the boundary.
  CHECK(divergence_classifier(ApproxFunction::power_log(one, Rational(1, 2), Rational(1, 2)), 2, 1, one) ==
        SeriesVerdict::kDiverges);
  CHECK(divergence_classifier(ApproxFunction::power_log(one, Rational(1, 2), Rational(1)), 2, 1, one) ==
        SeriesVerdict::kConverges);
  CHECK_THROWS_AS(divergence_classifier(ApproxFunction::table({Rational(1, 2)}), 2, 1, one), Error);

  ApproxFunction c = cantelli_function(2, 1, one, Rational(1, 10));
  CHECK(c.tau() == Rational(3, 5));
  CHECK(divergence_classifier(c, 2, 1, one) == SeriesVerdict::kConverges);
}

TEST_CASE("condensation agrees with the classifier") {
  const Rational one(1);
  for (Rational tau : {Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)}) {
    ApproxFunction psi = ApproxFunction::power(tau);
    CondensationReport r = condensation_check(psi, 2, 1, one, 2, 64);
    REQUIRE(r.verdict.has_value());
    CHECK(*r.verdict == divergence_classifier(psi, 2, 1, one));
    CHECK(r.log_terms.size() == r.log_partial.size());
  }
  CondensationReport flat = condensation_check(ApproxFunction::power(Rational(1, 2)), 2, 1, one, 2, 64);
  CHECK(std::fabs(flat.growth) < 1e-9);
  CHECK(!condensation_check(ApproxFunction::power(Rational(1)), 2, 1, one, 2, 4).verdict);
  CHECK(verdict_name(SeriesVerdict::kDiverges) != verdict_name(SeriesVerdict::kConverges));
}

TEST_CASE("dimension formula") {
  CHECK(dimension_formula(1, 2, 0.8) == doctest::Approx(2.0 / 3));
  CHECK(dimension_formula(1, 2, 0.5) == doctest::Approx(1.0));
  CHECK(dimension_formula(2, 3, 1.0 / 3) == doctest::Approx(2.0));
  CHECK(dimension_formula(1, 1, 1.0) == doctest::Approx(1.0));
  CHECK(dimension_formula(1, 1, 3.0) == doctest::Approx(0.5));
}

TEST_CASE("line box counts against center enumeration") {
  DimensionOptions opts;
  opts.scale_lo = 3;
  opts.scale_hi = 10;
  opts.fit_lo = 5;
  opts.fit_hi = 10;
  DimensionEstimate e = box_dimension_line(Rational(1), opts);
  for (int j = opts.scale_lo; j <= opts.scale_hi; ++j) {
    const int64_t qh = static_cast<int64_t>(std::floor(std::pow(2.0, j / 2.0)));
    uint64_t count = 0;
    for (int64_t b = 0; b < (int64_t(1) << j); ++b) {
      Rational c(BigInt(2 * b + 1), BigInt(1) << (j + 1));
      c.canonicalize();
      bool hit = false;
      for (int64_t q = qh / 2 + 1; q <= qh && !hit; ++q) {
        Rational t = Rational(1, q) + Rational(BigInt(q), BigInt(1) << (j + 1));
        for (int64_t p = 0; p <= q && !hit; ++p) {
          Rational off = q * c - p;
          if (off < 0) off = -off;
          hit = off < t;
        }
      }
      if (hit) ++count;
    }
    CHECK(e.counts[j - opts.scale_lo] == count);
    CHECK(e.q_block[j - opts.scale_lo] == qh);
  }
  CHECK(e.formula_value == doctest::Approx(1.0));
  CHECK(e.residuals.size() == 6);
  CHECK_THROWS_AS(box_dimension_line(Rational(1, 2), opts), Error);
}

TEST_CASE("subspace box counts against brute force") {
  AffineSubspaceSpec line = line_spec(lit("sqrt(2)"), lit("1/5"));
  const long double a = std::sqrt(2.0L);
  const Rational tau(4, 5);
  DimensionOptions opts;
  opts.scale_lo = 3;
  opts.scale_hi = 9;
  opts.fit_lo = 4;
  opts.fit_hi = 9;
  DimensionEstimate e = box_dimension(line, tau, opts);
  for (int j = opts.scale_lo; j <= opts.scale_hi; ++j) {
    const int64_t qh = static_cast<int64_t>(std::floor(std::pow(2.0, j / 1.8)));
    const long double h = std::ldexp(1.0L, -j);
    uint64_t count = 0;
    int ties = 0;
    for (int64_t b = 0; b < (int64_t(1) << j); ++b) {
      const long double c = (2 * b + 1) * h / 2;
      bool hit = false;
      for (int64_t q = qh / 2 + 1; q <= qh && !hit; ++q) {
        const long double base = std::pow(static_cast<long double>(q), -0.8L);
        const long double t1 = base + q * h / 2;
        const long double t2 = base + q * a * h / 2;
        const long double d1 = frac_dist(q * c);
        const long double d2 = frac_dist(q * (0.2L + a * c));
        bool first = d1 < t1;
        if (std::fabs(d1 - t1) < 1e-12L) {
          // Only q = r^5 gives a rational threshold; decide it exactly.
          const int64_t r = std::llround(std::pow(static_cast<double>(q), 0.2));
          if (r * r * r * r * r != q) {
            ++ties;
          } else {
            Rational qc(BigInt(q * (2 * b + 1)), BigInt(1) << (j + 1));
            qc.canonicalize();
            Rational off = qc - Rational(static_cast<long>(std::lround(static_cast<double>(q * c))));
            if (off < 0) off = -off;
            Rational thr = Rational(1, static_cast<long>(r * r * r * r)) + Rational(BigInt(q), BigInt(1) << (j + 1));
            first = off < thr;
          }
        }
        if (std::fabs(d2 - t2) < 1e-12L) ++ties;
        hit = first && d2 < t2;
      }
      if (hit) ++count;
    }
    REQUIRE(ties == 0);
    CHECK(e.counts[j - opts.scale_lo] == count);
  }
  opts.threads = 3;
  CHECK(box_dimension(line, tau, opts).counts == e.counts);
  CHECK(dimension_json(e).find("\"slope\"") != std::string::npos);
}
