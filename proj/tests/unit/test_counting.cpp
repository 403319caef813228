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

#include "diophlab/counting.hpp"
#include "diophlab/error.hpp"
#include "diophlab/exact_real.hpp"
#include "diophlab/rng.hpp"
#include "doctest.h"

using namespace diophlab;

namespace {

SurdSum lit(const char* s) { return ExactReal::parse(s).to_surd(); }

AffineSubspaceSpec sqrt2_line() { return line_spec(lit("sqrt(2)")); }

BigInt floor_q(const Rational& x) {
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return f;
}

bool close_exact(const AffineSubspaceSpec& spec, int64_t q, const std::vector<int64_t>& p,
                 const SurdSum& delta) {
  SurdSum worst;
  for (int v = 0; v < spec.codim(); ++v) {
    SurdSum s = spec.shift()[v] * Rational(q);
    for (int i = 0; i < spec.n(); ++i) s += spec.tilt()[i][v] * Rational(p[i]);
    SurdSum dist = s.nearest_int_distance();
    if (exact_less(worst, dist)) worst = dist;
  }
  return exact_less(worst, delta);
}

// Brute force over the integer box around q x0, rational centers only.
uint64_t oracle_exact(const AffineSubspaceSpec& spec, int64_t q, const SurdSum& delta,
                      const std::vector<Rational>& center, const Rational& eta, bool open_box,
                      int64_t p_min) {
  const int n = spec.n();
  std::vector<int64_t> lo(n), hi(n), p(n);
  for (int i = 0; i < n; ++i) {
    Rational a = (center[i] - eta) * q;
    Rational b = (center[i] + eta) * q;
    lo[i] = std::max<int64_t>(p_min, floor_q(a).get_si() - 1);
    hi[i] = floor_q(b).get_si() + 1;
  }
  uint64_t count = 0;
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      if (close_exact(spec, q, p, delta)) ++count;
      return;
    }
    for (int64_t v = lo[i]; v <= hi[i]; ++v) {
      Rational off = Rational(v) - center[i] * q;
      if (off < 0) off = -off;
      Rational lim = eta * q;
      if (open_box ? !(off < lim) : !(off <= lim)) continue;
      p[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return count;
}

}  // namespace

TEST_CASE("worked example") {
  CountConfig cfg{sqrt2_line(), 5, Real(Rational(1, 5)), Ball{{SurdSum(Rational(1, 2))}, Rational(1, 2)}};
  CHECK(count_exact(cfg) == 1);
  cfg.delta = Real(Rational(1, 2));
  CHECK(count_exact(cfg) == 4);
}

TEST_CASE("single-point regime") {
  CountConfig cfg{sqrt2_line(), 4, Real(Rational(1, 4)), Ball{{SurdSum(Rational(1, 3))}, Rational(1, 10)}};
  CHECK(count_exact(cfg) <= 1);
  Stream s(99, 0);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(s.uniform_int(0, 1));
    const int d = n + 1 + static_cast<int>(s.uniform_int(0, 1));
    SurdMatrix tilt(n, SurdVector(d - n));
    for (auto& row : tilt) {
      for (auto& v : row) v = SurdSum::scaled_sqrt(Rational(s.uniform_int(1, 9), s.uniform_int(1, 5)), BigInt(static_cast<long>(s.uniform_int(2, 30))));
    }
    AffineSubspaceSpec spec(d, n, tilt, SurdVector(d - n, SurdSum(Rational(s.uniform_int(0, 7), 8))));
    const int64_t q = s.uniform_int(1, 500);
    Rational eta(1, 2 * q + s.uniform_int(1, 50));
    SurdVector center;
    for (int j = 0; j < n; ++j) {
      center.push_back(SurdSum(eta + Rational(s.uniform_int(0, 1000), 1000) * (1 - 2 * eta)));
    }
    CountConfig c{spec, q, Real(Rational(s.uniform_int(1, 49), 100)), Ball{center, eta}};
    CHECK(count_exact(c) <= 1);
  }
}

TEST_CASE("exact count matches brute force") {
  Stream s(17, 1);
  for (int i = 0; i < 60; ++i) {
    const int n = 1 + static_cast<int>(s.uniform_int(0, 1));
    const int d = n + 1 + static_cast<int>(s.uniform_int(0, 1));
    SurdMatrix tilt(n, SurdVector(d - n));
    for (auto& row : tilt) {
      for (auto& v : row) v = SurdSum(Rational(s.uniform_int(-5, 5), 3)) + SurdSum::scaled_sqrt(Rational(1, s.uniform_int(1, 4)), BigInt(static_cast<long>(s.uniform_int(2, 13))));
    }
    AffineSubspaceSpec spec(d, n, tilt, SurdVector(d - n, lit("sqrt(3)/7")));
    const int64_t q = s.uniform_int(1, n == 1 ? 3000 : 120);
    std::vector<Rational> c;
    SurdVector center;
    for (int j = 0; j < n; ++j) {
      c.push_back(Rational(s.uniform_int(30, 70), 100));
      center.push_back(SurdSum(c.back()));
    }
    Rational eta(s.uniform_int(1, 30), 100);
    Rational delta(s.uniform_int(1, 60), 1000);
    CountConfig cfg{spec, q, Real(delta), Ball{center, eta}};
    CHECK(count_exact(cfg) == oracle_exact(spec, q, SurdSum(delta), c, eta, true, 1));
  }
}

TEST_CASE("every point counts once delta reaches one half") {
  CountConfig cfg{sqrt2_line(), 50, Real(Rational(1, 2)), Ball{{SurdSum(Rational(1, 2))}, Rational(1, 5)}};
  // Open box (15, 35).
  CHECK(count_exact(cfg) == 19);
}

TEST_CASE("counts are identical across thread counts") {
  AffineSubspaceSpec plane(3, 2, {{lit("sqrt(2)")}, {lit("sqrt(3)")}}, {SurdSum(0L)});
  CountConfig cfg{plane, 700, Real(Rational(1, 50)), Ball{{SurdSum(Rational(1, 2)), SurdSum(Rational(1, 3))}, Rational(1, 4)}};
  CHECK(count_exact(cfg, 1) == count_exact(cfg, 4));
}

TEST_CASE("level count against brute force and its bound") {
  AffineSubspaceSpec line = sqrt2_line();
  ApproxFunction psi = ApproxFunction::power(Rational(1, 2));
  Ball unit{{SurdSum(Rational(1, 2))}, Rational(1, 2)};
  AggregateConfig one{line, 45, 1, psi, unit};
  CHECK(count_aggregate(one) == 1);
  for (int t : {2, 3}) {
    AggregateConfig cfg{line, 45, t, psi, unit};
    int64_t qmax = t == 2 ? 45 : 2025;
    SurdSum delta = psi.value(BigInt(static_cast<long>(qmax * 45))).exact() * Rational(1, 2);
    uint64_t oracle = 0;
    for (int64_t q = 1; q <= qmax; ++q) {
      oracle += oracle_exact(line, q, delta, {Rational(1, 2)}, Rational(1, 2), false, 0);
    }
    CHECK(count_aggregate(cfg) == oracle);
    CHECK(count_aggregate(cfg, 4) == oracle);
    CHECK(static_cast<double>(oracle) < theorem4_bound(45, t, psi, Rational(1), 2, 1).lo_down());
  }
}

TEST_CASE("bound formulas") {
  ApproxFunction psi = ApproxFunction::power(Rational(1, 2));
  Interval t4 = theorem4_bound(45, 2, psi, Rational(1), 2, 1);
  CHECK(t4.contains(Rational(10935)));
  CHECK(theorem4_bound(45, 2, psi, Rational(0), 2, 1).mid() == 0);
  Interval r3 = theorem4_bound(45, 3, psi, Rational(1), 2, 1);
  CHECK(r3.mid() / t4.mid() == doctest::Approx(std::pow(45.0, -0.5) * 45 * 45));

  Interval l3 = lemma3_bound(100, Real(Rational(1, 5)), Rational(1), 1.05, 1.0, 2, 1);
  CHECK(l3.mid() == doctest::Approx(180 + std::pow(0.2, -0.05) * std::log(4.0)).epsilon(1e-12));
  CHECK(std::fabs(l3.mid() - 181.503) < 1e-3);
  CHECK(lemma3_bound(100, Real(Rational(1, 5)), Rational(0), 1.05, 1.0, 2, 1).mid() ==
        doctest::Approx(std::pow(0.2, -0.05) * std::log(4.0)));
  CHECK_THROWS_AS(lemma3_bound(100, Real(Rational(1, 2)), Rational(1), 1.05, 1.0, 2, 1), Error);
  CHECK_THROWS_AS(lemma3_bound(100, Real(0L), Rational(1), 1.05, 1.0, 2, 1), Error);
  CHECK(lemma3_constant(2.0, 3, 1) == doctest::Approx(18.0));
}

TEST_CASE("sweep reports") {
  AffineSubspaceSpec line = sqrt2_line();
  ApproxFunction psi = ApproxFunction::power(Rational(1, 2));
  std::vector<Ball> balls = {Ball{{SurdSum(Rational(1, 2))}, Rational(1, 2)}};
  CountingReport empty = verify_counting_sweep(line, psi, 45, {}, balls, 10, 1.05);
  CHECK(empty.rows.empty());
  CountingReport tiny = verify_counting_sweep(line, psi, 45, {1, 2, 3}, balls, 1e-9, 1.05);
  size_t single_fail = 0;
  for (const auto& r : tiny.rows) {
    if (r.kind == "single" && !r.pass) ++single_fail;
    if (r.kind == "aggregate") CHECK(r.pass);
  }
  // The log term alone keeps the single-point rows above their counts.
  CHECK(single_fail == 0);
  for (const auto& r : tiny.rows) {
    CHECK(r.margin == doctest::Approx(r.bound - static_cast<double>(r.count)));
  }
  CHECK(tiny.t0 == std::vector<int>{1});
  std::string csv = counting_csv(tiny);
  CHECK(csv.rfind("kind,ball,k,t,q,count,bound,margin,status\n", 0) == 0);
}
