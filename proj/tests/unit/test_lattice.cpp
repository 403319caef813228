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


#include <algorithm>
#include <cmath>

#include "diophlab/error.hpp"
#include "diophlab/exact_real.hpp"
#include "diophlab/lattice.hpp"
#include "diophlab/rng.hpp"
#include "doctest.h"

using namespace diophlab;

namespace {

SurdSum lit(const char* s) { return ExactReal::parse(s).to_surd(); }

LinearFormsSystem rational_system(const std::vector<std::vector<Rational>>& beta,
                                  const std::vector<Rational>& bounds) {
  LinearFormsSystem sys;
  for (const auto& row : beta) {
    std::vector<Real> r;
    for (const auto& v : row) r.push_back(Real(v));
    sys.beta.push_back(r);
  }
  for (const auto& c : bounds) sys.bounds.push_back(Real(c));
  return sys;
}

// Independent check of the inequalities in exact arithmetic (rational
// entries) or at 512 bits.
bool holds_512(const LinearFormsSystem& sys, const IntPoint& x) {
  const int k = sys.size();
  for (int i = 0; i < k; ++i) {
    Interval acc(0L, 512);
    for (int j = 0; j < k; ++j) acc += sys.beta[i][j].eval(512) * Interval(static_cast<long>(x[j]), 512);
    Interval a = abs(acc);
    Interval c = sys.bounds[i].eval(512);
    bool ok = i + 1 < k ? certainly_less(a, c) : certainly_leq(a, c);
    if (!ok) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("identity system") {
  auto sys = rational_system({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {1, 1, 1});
  // Equality with exact entries certifies.
  CHECK(check_determinant(sys).status == DetStatus::kCertified);
  IntPoint x = solve_linear_forms(sys).x;
  CHECK(x[0] == 0);
  CHECK(x[1] == 0);
  CHECK(std::abs(x[2]) == 1);
}

TEST_CASE("diagonal system") {
  auto sys = rational_system({{2, 0}, {0, Rational(1, 2)}}, {1, 1});
  IntPoint x = solve_linear_forms(sys).x;
  CHECK(x[0] == 0);
  CHECK(std::abs(x[1]) >= 1);
  CHECK(std::abs(x[1]) <= 2);
  auto all = box_solutions(sys, 3);
  CHECK(all == std::vector<IntPoint>{{0, -2}, {0, -1}, {0, 1}, {0, 2}});
}

TEST_CASE("unimodular systems against the box oracle") {
  Stream s(4, 0);
  int tested = 0;
  while (tested < 30) {
    // Product of random elementary integer matrices.
    std::vector<std::vector<long>> m = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int step = 0; step < 4; ++step) {
      int a = static_cast<int>(s.uniform_int(0, 2));
      int b = static_cast<int>(s.uniform_int(0, 2));
      if (a == b) continue;
      long f = static_cast<long>(s.uniform_int(-2, 2));
      for (int c = 0; c < 3; ++c) m[a][c] += f * m[b][c];
    }
    std::vector<std::vector<Rational>> beta(3, std::vector<Rational>(3));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) beta[i][j] = m[i][j];
    }
    auto sys = rational_system(beta, {1, 1, 1});
    const int64_t r = solution_box_radius(sys);
    if (r > 40) continue;
    ++tested;
    IntPoint x = solve_linear_forms(sys).x;
    auto oracle = box_solutions(sys, r);
    CHECK(std::find(oracle.begin(), oracle.end(), x) != oracle.end());
    CHECK(holds_512(sys, x));
  }
}

TEST_CASE("random certified systems against the box oracle") {
  for (uint64_t i = 0; i < 120; ++i) {
    const int k = 1 + static_cast<int>(i % 4);
    LinearFormsSystem sys = random_certified_system(8, i, k, 6);
    CHECK(check_determinant(sys).status == DetStatus::kCertified);
    SolveResult r = solve_linear_forms(sys);
    CHECK(holds_512(sys, r.x));
    auto oracle = box_solutions(sys, solution_box_radius(sys));
    CHECK(!oracle.empty());
    CHECK(std::find(oracle.begin(), oracle.end(), r.x) != oracle.end());
    for (const auto& y : oracle) CHECK(holds_512(sys, y));
  }
  LinearFormsSystem a = random_certified_system(8, 3, 3, 6);
  LinearFormsSystem b = random_certified_system(8, 3, 3, 6);
  CHECK(a.bounds[2].exact() == b.bounds[2].exact());
}

TEST_CASE("violated determinant condition") {
  auto sys = rational_system({{3, 0}, {0, 3}}, {1, 1});
  CHECK(check_determinant(sys).status == DetStatus::kViolated);
  CHECK_THROWS_AS(solve_linear_forms(sys), Error);
}

TEST_CASE("containment system") {
  AffineSubspaceSpec line = line_spec(lit("sqrt(2)"));
  ApproxFunction psi = ApproxFunction::power(Rational(1, 2));
  LinearFormsSystem sys = build_containment_system({lit("sqrt(2)/2")}, 16, psi, line);
  REQUIRE(sys.size() == 3);
  CHECK(sys.bounds[0].approx() == doctest::Approx(0.125));
  CHECK(sys.bounds[1].approx() == doctest::Approx(0.5));
  CHECK(sys.bounds[2].approx() == doctest::Approx(16.0));
  for (int64_t N : {7, 16, 1000}) {
    DetCheck det = check_determinant(build_containment_system({lit("1/3")}, N, psi, line));
    CHECK(det.det.mid() == doctest::Approx(1.0));
    CHECK(det.product.mid() == doctest::Approx(1.0));
    CHECK(det.status != DetStatus::kViolated);
    CHECK(det.status != DetStatus::kUndecided);
  }
  AffineSubspaceSpec plane(3, 2, {{lit("sqrt(2)")}, {lit("sqrt(3)")}}, {SurdSum(0L)});
  DetCheck det = check_determinant(
      build_containment_system({lit("1/3"), lit("1/5")}, 100, psi, plane));
  CHECK(det.product.mid() == doctest::Approx(1.0));
}

TEST_CASE("covering witnesses satisfy the three inequalities") {
  AffineSubspaceSpec line = line_spec(lit("sqrt(2)"));
  ApproxFunction psi = ApproxFunction::power(Rational(1, 2));
  const int64_t N = 1000;
  std::vector<SurdVector> xs = {{lit("sqrt(2)/2")}, {lit("1/3")}, {lit("(1+sqrt(5))/4")}};
  for (uint64_t i = 0; i < 40; ++i) xs.push_back(sample_point(21, i, 40, 1).to_surd());
  for (const auto& x : xs) {
    CoveringWitness w = covering_witness(x, N, psi, line);
    CHECK(w.valid());
    // Independent re-check at 512 bits.
    const long double sq2 = std::sqrt(2.0L);
    long double val = w.p_hat.p[0] * sq2;
    long double close = std::fabs(val - std::nearbyint(val));
    CHECK(close < 0.5L / std::sqrt(static_cast<long double>(N)));
    long double off = std::fabs(w.p_hat.q * static_cast<long double>(x[0].approx()) - w.p_hat.p[0]);
    CHECK(off < 2.0L / (N * std::pow(static_cast<long double>(N), -0.5L)) * (1 + 1e-12L));
    CHECK(w.p_hat.q >= 1);
    CHECK(w.p_hat.q <= N);
  }
  CoveringWitness one = covering_witness({lit("1/3")}, 1, psi, line);
  CHECK(one.p_hat.q == 1);
}

TEST_CASE("witness json") {
  AffineSubspaceSpec line = line_spec(lit("sqrt(2)"));
  CoveringWitness w = covering_witness({lit("1/3")}, 100, ApproxFunction::power(Rational(1, 2)), line);
  std::string j = witness_json({lit("1/3")}, w);
  for (const char* key : {"\"q\"", "\"p\"", "\"r\"", "\"closeness_ok\"", "\"radius_ok\"", "\"height_ok\"", "\"statement_radius_ok\""}) {
    CHECK(j.find(key) != std::string::npos);
  }
}
