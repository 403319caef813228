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
#include <set>

#include "diophlab/error.hpp"
#include "diophlab/exact_real.hpp"
#include "diophlab/fixed.hpp"
#include "diophlab/parallel.hpp"
#include "diophlab/real.hpp"
#include "diophlab/rng.hpp"
#include "diophlab/subspace.hpp"
#include "doctest.h"

using namespace diophlab;

namespace {

SurdSum lit(const char* s) { return ExactReal::parse(s).to_surd(); }

// Independent evaluation at 512 bits straight from MPFR.
double mpfr_value(const SurdSum& x) { return x.evaluate(512).mid(); }

}  // namespace

TEST_CASE("exact real literals") {
  CHECK(ExactReal::parse("7").to_string() == "7");
  CHECK(ExactReal::parse("-6/8").to_string() == "-3/4");
  CHECK(ExactReal::parse("(2+2*sqrt(8))/4").to_string() == "(1+2*sqrt(2))/2");
  CHECK(ExactReal::parse("-sqrt(2)") == ExactReal(0, -1, 2, 1));
  CHECK(ExactReal::parse("3*sqrt(2)").approx() == doctest::Approx(3 * std::sqrt(2.0)));
  CHECK(ExactReal::golden_ratio().approx() == doctest::Approx((1 + std::sqrt(5.0)) / 2));
  CHECK_THROWS_AS(ExactReal::parse("1/0"), Error);
  CHECK_THROWS_AS(ExactReal::parse("sqrt(x)"), Error);
  for (const char* s : {"5/7", "(3-sqrt(5))/2", "-4*sqrt(3)/5", "(-1+7*sqrt(11))/3"}) {
    ExactReal v = ExactReal::parse(s);
    CHECK(ExactReal::parse(v.to_string()) == v);
  }
}

TEST_CASE("surd arithmetic against high-precision evaluation") {
  SurdSum a = lit("(1+sqrt(2))/1");
  SurdSum b = lit("(1-sqrt(2))/1");
  CHECK(a * b == SurdSum(-1L));
  SurdSum phi = ExactReal::golden_ratio().to_surd();
  CHECK(phi * phi == phi + SurdSum(1L));
  CHECK(phi.inverse() == phi - SurdSum(1L));
  SurdSum mixed = lit("sqrt(2)") + lit("sqrt(3)");
  CHECK(mpfr_value(mixed * mixed) == doctest::Approx(5 + 2 * std::sqrt(6.0)));
  CHECK((lit("sqrt(2)") - SurdSum(Rational(99, 70))).sign() == -1);
  CHECK((lit("sqrt(2)") - SurdSum(Rational(140, 99))).sign() == 1);
  CHECK(lit("2*sqrt(2)").floor() == 2);
  CHECK(lit("-2*sqrt(2)").ceil() == -2);
}

TEST_CASE("nearest integer distance") {
  CHECK(nearest_int_dist_exact({SurdSum(Rational(2, 5)), SurdSum(Rational(7, 4))}) ==
        SurdSum(Rational(2, 5)));
  CHECK(nearest_int_dist_exact({SurdSum(3L), SurdSum(-8L)}).is_zero());
  Interval d = nearest_int_dist({lit("2*sqrt(2)")}, 64);
  CHECK(std::fabs(d.mid() - (3 - 2 * std::sqrt(2.0))) < 1e-12);
  CHECK(std::fabs(d.mid() - 0.17157) < 1e-5);
  CHECK(d.width_at_most(64));
}

TEST_CASE("interval enclosures are outward") {
  Interval third(Rational(1, 3), 64);
  CHECK(third.contains(Rational(1, 3)));
  Interval s = sqrt(Interval(2L, 200));
  CHECK(certainly_less(s * s - Interval(2L, 200), Interval(Rational(1, 1000000), 200)));
  CHECK(s.contains(Rational(1414213562373095, 1000000000000000)) == false);
  CHECK(!s.contains_zero());
}

TEST_CASE("real powers and certified comparison") {
  Real r = real_pow(Real(32L), Rational(4, 5));
  REQUIRE(r.is_exact());
  CHECK(r.exact() == SurdSum(16L));
  Real inv = real_pow(Real(Rational(1, 32)), Rational(-4, 5));
  REQUIRE(inv.is_exact());
  CHECK(inv.exact() == SurdSum(16L));
  Real half = real_pow(Real(8L), Rational(1, 2));
  REQUIRE(half.is_exact());
  CHECK(half.exact() == lit("2*sqrt(2)"));
  Real cube = real_pow(Real(2L), Rational(1, 3));
  CHECK(!cube.is_exact());
  CHECK(certified_less(cube, Real(Rational(126, 100))));
  CHECK(certified_compare(Real(2L), real_pow(Real(4L), Rational(1, 2))) == 0);
  // Equal lazy values never separate.
  Real twice = cube * real_pow(Real(4L), Rational(1, 3));
  CHECK_THROWS_AS(certified_compare(twice, Real(2L), Precision{64, 256}), Error);
}

TEST_CASE("fixed-point distance encloses the exact distance") {
  for (const char* s : {"sqrt(2)", "(1+sqrt(5))/2", "1/3", "-7/8", "5*sqrt(7)/3"}) {
    SurdSum x = lit(s);
    DistBound d = distance(mod_one(x));
    double exact = mpfr_value(x.nearest_int_distance());
    CHECK(static_cast<double>(dist_lo_ld(d)) <= exact);
    CHECK(static_cast<double>(dist_hi_ld(d)) >= exact);
    CHECK(d.hi - d.lo < (u128(1) << 16));
  }
  FixedThreshold t = fixed_threshold(Real(Rational(1, 4)));
  CHECK(less(distance(mod_one(SurdSum(Rational(1, 5)))), t) == Tri::kYes);
  CHECK(less(distance(mod_one(SurdSum(Rational(3, 10)))), t) == Tri::kNo);
  // Exactly on the threshold: not strictly below.
  CHECK(less(distance(mod_one(SurdSum(Rational(1, 4)))), t) == Tri::kNo);
  Interval around = Interval::hull(Rational(249, 1000), Rational(251, 1000), 128);
  CHECK(less(distance(mod_one(around)), t) == Tri::kUnknown);
}

TEST_CASE("subspace geometry") {
  AffineSubspaceSpec line = line_spec(lit("sqrt(2)"));
  HattedVector p{5, {2}};
  CHECK(hat_dot(p, line) == SurdVector{lit("2*sqrt(2)")});
  AffineSubspaceSpec shifted = line_spec(lit("sqrt(2)"), SurdSum(Rational(1, 3)));
  CHECK(hat_dot(HattedVector{6, {0}}, shifted) == SurdVector{SurdSum(2L)});

  AffineSubspaceSpec plane(3, 2, {{SurdSum(Rational(1, 3))}, {SurdSum(Rational(1, 5))}},
                           {SurdSum(Rational(1, 2))});
  CHECK(hat_dot(HattedVector{3, {1, 2}}, plane) == SurdVector{SurdSum(Rational(67, 30))});

  CHECK(lift({SurdSum(Rational(1, 2))}, line) ==
        SurdVector{SurdSum(Rational(1, 2)), lit("sqrt(2)/2")});
  AffineSubspaceSpec tilted(3, 2, {{SurdSum(Rational(1, 3))}, {SurdSum(Rational(1, 7))}},
                            {SurdSum(Rational(1, 2))});
  CHECK(lift({SurdSum(1L), SurdSum(1L)}, tilted) ==
        SurdVector{SurdSum(1L), SurdSum(1L), SurdSum(Rational(41, 42))});
  CHECK(lift({SurdSum(0L)}, shifted)[1] == SurdSum(Rational(1, 3)));
}

TEST_CASE("neighbourhood radius") {
  AffineSubspaceSpec line = line_spec(lit("sqrt(2)"));
  ApproxFunction psi = ApproxFunction::power(Rational(1, 2));
  double v = psi_capital(BigInt(100), psi, line).approx();
  CHECK(v == doctest::Approx(1.0 / (2000 * std::sqrt(2.0))).epsilon(1e-12));
  CHECK(std::fabs(v - 3.5355e-4) < 1e-8);
  AffineSubspaceSpec flat = line_spec(SurdSum(Rational(1, 2)));
  CHECK(psi_capital(BigInt(1), ApproxFunction::power(Rational(0)), flat).approx() ==
        doctest::Approx(1.0));
  ApproxFunction inv = ApproxFunction::power(Rational(1));
  double a = psi_capital(BigInt(10), inv, line).approx();
  double b = psi_capital(BigInt(20), inv, line).approx();
  CHECK(b == doctest::Approx(a / 4));
  CHECK_THROWS_AS(psi_capital(BigInt(1), psi, line_spec(SurdSum(0L))), Error);
}

TEST_CASE("strip translation") {
  AffineSubspaceSpec line = line_spec(lit("sqrt(2)"));
  CHECK(strip_translate(line, {0}) == line);
  AffineSubspaceSpec moved = strip_translate(line, {1});
  CHECK(moved.shift()[0] == lit("sqrt(2)"));
  CHECK(moved.tilt()[0][0] == lit("sqrt(2)"));
  CHECK(strip_translate(moved, {-1}) == line);
  AffineSubspaceSpec plane(4, 2, {{lit("sqrt(3)"), SurdSum(1L)}, {SurdSum(2L), lit("sqrt(5)")}},
                           {SurdSum(Rational(1, 2)), SurdSum(0L)});
  CHECK(strip_translate(strip_translate(plane, {3, -2}), {-3, 2}) == plane);
}

TEST_CASE("subspace text round trip") {
  AffineSubspaceSpec plane(4, 2, {{lit("sqrt(3)"), SurdSum(1L)}, {SurdSum(2L), lit("(1+sqrt(5))/2")}},
                           {SurdSum(Rational(1, 2)), SurdSum(0L)});
  CHECK(AffineSubspaceSpec::from_text(plane.to_text()) == plane);
  CHECK_THROWS_AS(AffineSubspaceSpec::from_text("[subspace]\nd = 2\n"), Error);
}

TEST_CASE("random streams and the sampler") {
  Stream a(7, 3), b(7, 3), c(7, 4);
  uint64_t x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  const uint64_t N = 500;
  std::set<std::string> seen;
  for (uint64_t i = 0; i < N; ++i) {
    DyadicPoint p = sample_point(11, i, N, 1);
    CHECK(mpz_odd_p(p.num[0].get_mpz_t()));
    Rational v = p.coord(0);
    CHECK(v >= Rational(i, N));
    CHECK(v < Rational(i + 1, N));
    seen.insert(p.num[0].get_str());
    CHECK(sample_point(11, i, N, 1).num == p.num);
  }
  CHECK(seen.size() == N);
  DyadicPoint q = sample_point(2, 5, 100, 2);
  CHECK(q.num.size() == 2);
  for (size_t i = 0; i < 2; ++i) CHECK(q.coord(i) < 1);
}

TEST_CASE("chunked execution is independent of the thread count") {
  auto chunks = make_chunks(0, 1000, 37);
  auto body = [](const ChunkRange& r) {
    uint64_t s = 0;
    for (uint64_t i = r.begin; i < r.end; ++i) s += i * i;
    return s;
  };
  auto one = run_chunks<uint64_t>(chunks, 1, body);
  auto four = run_chunks<uint64_t>(chunks, 4, body);
  CHECK(one == four);
  uint64_t total = 0;
  for (auto v : one) total += v;
  CHECK(total == 999ULL * 1000 * 1999 / 6);
  CHECK_THROWS_AS(run_chunks<int>(chunks, 3,
                                  [](const ChunkRange& r) -> int {
                                    if (r.index == 5) fail(ErrorCode::kInternal, "boom");
                                    return 0;
                                  }),
                  Error);
}

TEST_CASE("approximation functions") {
  ApproxFunction p = ApproxFunction::power_log(Rational(2), Rational(1, 2), Rational(1));
  CHECK(p.approx(100.0) == doctest::Approx(2 / (10 * std::log(101.0))));
  CHECK(ApproxFunction::power(Rational(1, 2)).value(100L).exact() == SurdSum(Rational(1, 10)));
  ApproxFunction t = ApproxFunction::table({Rational(1, 2), Rational(1, 3), Rational(1, 5)});
  CHECK(t.value(2L).exact() == SurdSum(Rational(1, 3)));
  CHECK(t.value(9L).exact() == SurdSum(Rational(1, 5)));
  CHECK_THROWS_AS(ApproxFunction::table({Rational(1, 3), Rational(1, 2)}), Error);
  Interval e = p.enclosure(BigInt(100), 128);
  CHECK(e.lo_down() <= p.approx(100.0));
  CHECK(e.hi_up() >= p.approx(100.0) * (1 - 1e-15));
}
