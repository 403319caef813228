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


#include "diophlab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "diophlab/closeness.hpp"
#include "diophlab/error.hpp"
#include "diophlab/parallel.hpp"

namespace diophlab {

namespace {

void validate_ball(const Ball& ball, int n, const Precision& prec) {
  require(static_cast<int>(ball.center.size()) == n, "ball center must have n entries");
  require(ball.radius > 0, "ball radius must be positive");
  for (const auto& c : ball.center) {
    require(exact_leq(SurdSum(ball.radius), c, prec) &&
                exact_leq(c + SurdSum(ball.radius), SurdSum(1L), prec),
            "ball must lie inside the unit cube");
  }
}

int64_t checked_power(int64_t k, int e) {
  BigInt v;
  mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(e));
  require(v.fits_slong_p() && v < (BigInt(1) << 62), "k^t exceeds the 62-bit range");
  return v.get_si();
}

// Counts p in the box lo <= p <= hi with ||p^ A~|| < delta.
uint64_t count_box(const ClosenessKernel& kernel, int64_t q, std::vector<int64_t> lo,
                   std::vector<int64_t> hi, const FixedThreshold& fixed, const Real& delta) {
  const int n = static_cast<int>(lo.size());
  const int m = kernel.spec().codim();
  for (int i = 0; i < n; ++i) {
    if (lo[i] > hi[i]) return 0;
  }
  std::vector<ModOne> step(m);
  for (int v = 0; v < m; ++v) step[v] = kernel.tilt_fixed(n - 1, v);
  uint64_t count = 0;
  std::vector<int64_t> p = lo;
  std::vector<ModOne> cur(m);
  HattedVector hv{q, p};
  while (true) {
    p[n - 1] = lo[n - 1];
    for (int v = 0; v < m; ++v) cur[v] = kernel.column(q, p, v);
    for (int64_t x = lo[n - 1]; x <= hi[n - 1]; ++x) {
      bool no = false;
      bool unknown = false;
      for (int v = 0; v < m && !no; ++v) {
        Tri r = less(distance(cur[v]), fixed);
        if (r == Tri::kNo) no = true;
        if (r == Tri::kUnknown) unknown = true;
      }
      if (!no) {
        if (!unknown) {
          ++count;
        } else {
          hv.p = p;
          hv.p[n - 1] = x;
          if (kernel.test_exact(hv, delta)) ++count;
        }
      }
      for (int v = 0; v < m; ++v) cur[v] = add(cur[v], step[v]);
    }
    int i = n - 2;
    while (i >= 0 && p[i] == hi[i]) {
      p[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++p[i];
  }
  return count;
}

BigInt box_size(const std::vector<int64_t>& lo, const std::vector<int64_t>& hi) {
  BigInt s = 1;
  for (size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) return 0;
    s *= BigInt(hi[i] - lo[i] + 1);
  }
  return s;
}

int64_t to_i64(const BigInt& v) {
  require(v.fits_slong_p(), "box coordinate exceeds 64 bits");
  return v.get_si();
}

}  // namespace

uint64_t count_exact(const CountConfig& cfg, int threads, uint64_t budget,
                     const Precision& prec) {
  const AffineSubspaceSpec& spec = cfg.subspace;
  const int n = spec.n();
  require(cfg.q >= 1, "count: q must be positive");
  require(certified_less(Real(0L), cfg.delta, prec), "count: delta must be positive");
  validate_ball(cfg.ball, n, prec);
  std::vector<int64_t> lo(n), hi(n);
  const Rational q(cfg.q);
  const Rational qeta = q * cfg.ball.radius;
  for (int i = 0; i < n; ++i) {
    SurdSum c = cfg.ball.center[i] * q;
    lo[i] = std::max<int64_t>(1, to_i64((c - SurdSum(qeta)).floor(prec) + 1));
    hi[i] = to_i64((c + SurdSum(qeta)).ceil(prec) - 1);
  }
  BigInt size = box_size(lo, hi);
  if (size == 0) return 0;
  if (size > BigInt(std::to_string(budget))) {
    fail(ErrorCode::kBudgetExceeded, "count: box of " + size.get_str() +
                                         " points exceeds the test budget");
  }
  ClosenessKernel kernel(spec, prec);
  FixedThreshold fixed = fixed_threshold(cfg.delta);
  auto chunks = make_chunks(static_cast<uint64_t>(lo[0]), static_cast<uint64_t>(hi[0]) + 1,
                            n == 1 ? 1u << 16 : 64);
  auto parts = run_chunks<uint64_t>(chunks, threads, [&](const ChunkRange& c) {
    std::vector<int64_t> l = lo, h = hi;
    l[0] = static_cast<int64_t>(c.begin);
    h[0] = static_cast<int64_t>(c.end) - 1;
    return count_box(kernel, cfg.q, l, h, fixed, cfg.delta);
  });
  uint64_t total = 0;
  for (uint64_t v : parts) total += v;
  return total;
}

double lemma3_constant(double c_sum, int d, int n) {
  return std::pow(3.0, d - n) * c_sum;
}

Interval lemma3_bound(int64_t q, const Real& delta, const Rational& measure, double omega,
                      double c, int d, int n) {
  require(q >= 1, "lemma3_bound: q must be positive");
  require(n >= 1 && n < d, "lemma3_bound: need 1 <= n < d");
  require(omega > 0, "lemma3_bound: omega must be positive");
  if (!certified_less(Real(0L), delta) || !certified_less(delta, Real(Rational(1, 2)))) {
    fail(ErrorCode::kDomain, "lemma3_bound: delta must lie in (0, 1/2)");
  }
  const long prec = 128;
  Interval del = delta.eval(prec);
  Interval first = pow_int(Interval(3L, prec), d) * pow_int(del, d - n) *
                   pow_int(Interval(q, prec), n) * Interval(measure, prec);
  Interval expo = Interval(static_cast<long>(d - n), prec) - Interval::from_double(omega, prec);
  Interval lg = log(Interval(1L, prec) / del - Interval(1L, prec));
  Interval second = Interval::from_double(c, prec) * pow(del, expo) * pow_int(lg, n);
  return first + second;
}

uint64_t count_aggregate(const AggregateConfig& cfg, int threads, uint64_t budget,
                         const Precision& prec) {
  const AffineSubspaceSpec& spec = cfg.subspace;
  const int n = spec.n();
  require(cfg.k >= 2, "aggregate: k must be at least 2");
  require(cfg.t >= 1, "aggregate: t must be at least 1");
  validate_ball(cfg.ball, n, prec);
  const int64_t q_max = checked_power(cfg.k, cfg.t - 1);
  const BigInt kt = BigInt(checked_power(cfg.k, cfg.t));
  Real delta = cfg.psi.value(kt) * Real(Rational(1, 2));
  // Estimated membership tests, checked before enumerating.
  {
    long double est = 0;
    const long double side = 2.0L * static_cast<long double>(cfg.ball.radius.get_d());
    for (int64_t q = 1; q <= q_max; ++q) {
      est += std::pow(side * static_cast<long double>(q) + 1.0L, static_cast<long double>(n));
    }
    if (est > static_cast<long double>(budget)) {
      fail(ErrorCode::kBudgetExceeded, "aggregate: about " + std::to_string(static_cast<double>(est)) +
                                           " tests exceed the budget");
    }
  }
  ClosenessKernel kernel(spec, prec);
  FixedThreshold fixed = fixed_threshold(delta);
  auto chunks = make_chunks(1, static_cast<uint64_t>(q_max) + 1, 512);
  auto parts = run_chunks<uint64_t>(chunks, threads, [&](const ChunkRange& c) {
    uint64_t sum = 0;
    std::vector<int64_t> lo(n), hi(n);
    for (uint64_t uq = c.begin; uq < c.end; ++uq) {
      const Rational q(BigInt(static_cast<unsigned long>(uq)));
      const Rational qeta = q * cfg.ball.radius;
      for (int i = 0; i < n; ++i) {
        SurdSum center = cfg.ball.center[i] * q;
        lo[i] = std::max<int64_t>(0, to_i64((center - SurdSum(qeta)).ceil(prec)));
        hi[i] = to_i64((center + SurdSum(qeta)).floor(prec));
      }
      sum += count_box(kernel, static_cast<int64_t>(uq), lo, hi, fixed, delta);
    }
    return sum;
  });
  uint64_t total = 0;
  for (uint64_t v : parts) total += v;
  return total;
}

Interval theorem4_bound(int64_t k, int t, const ApproxFunction& psi, const Rational& measure,
                        int d, int n) {
  require(k >= 2 && t >= 1, "theorem4_bound: need k >= 2 and t >= 1");
  require(n >= 1 && n < d, "theorem4_bound: need 1 <= n < d");
  const long prec = 128;
  BigInt kt;
  mpz_ui_pow_ui(kt.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(t));
  BigInt kpow;
  mpz_ui_pow_ui(kpow.get_mpz_t(), static_cast<unsigned long>(k),
                static_cast<unsigned long>((t - 1) * (n + 1)));
  return pow_int(Interval(3L, prec), d + n + 2) * pow_int(psi.value(kt).eval(prec), d - n) *
         Interval(kpow, prec) * Interval(measure, prec);
}

CountingReport verify_counting_sweep(const AffineSubspaceSpec& subspace,
                                     const ApproxFunction& psi, int64_t k,
                                     const std::vector<int>& t_range,
                                     const std::vector<Ball>& balls, double c, double omega,
                                     int threads, uint64_t budget) {
  CountingReport report;
  const int d = subspace.d();
  const int n = subspace.n();
  for (size_t b = 0; b < balls.size(); ++b) {
    const Ball& ball = balls[b];
    const Rational mb = ball.measure();
    std::vector<std::pair<int, bool>> agg;
    for (int t : t_range) {
      AggregateConfig acfg{subspace, k, t, psi, ball};
      CountingRow row;
      row.kind = "aggregate";
      row.ball = b;
      row.k = k;
      row.t = t;
      row.q = checked_power(k, t - 1);
      row.count = count_aggregate(acfg, threads, budget);
      Interval bound = theorem4_bound(k, t, psi, mb, d, n);
      row.bound = bound.lo_down();
      row.margin = row.bound - static_cast<double>(row.count);
      row.pass = certainly_less(Interval(BigInt(std::to_string(row.count)), 128), bound);
      agg.emplace_back(t, row.pass);
      report.rows.push_back(row);

      CountingRow single;
      single.kind = "single";
      single.ball = b;
      single.k = k;
      single.t = t;
      single.q = row.q;
      Real delta = psi.value(BigInt(checked_power(k, t))) * Real(Rational(1, 2));
      CountConfig ccfg{subspace, single.q, delta, ball};
      single.count = count_exact(ccfg, threads, budget);
      if (Rational(single.q) * ball.radius * 2 < 1) {
        single.bound = 1;
        single.pass = single.count <= 1;
      } else if (certified_less(delta, Real(Rational(1, 2)))) {
        Interval bound3 = lemma3_bound(single.q, delta, mb, omega, c, d, n);
        single.bound = bound3.lo_down();
        single.pass =
            certainly_less(Interval(BigInt(std::to_string(single.count)), 128), bound3);
      } else {
        continue;
      }
      single.margin = single.bound - static_cast<double>(single.count);
      report.rows.push_back(single);
    }
    int t0 = -1;
    for (auto it = agg.rbegin(); it != agg.rend() && it->second; ++it) t0 = it->first;
    report.t0.push_back(t0);
  }
  return report;
}

std::string counting_csv(const CountingReport& report) {
  std::ostringstream os;
  os << "kind,ball,k,t,q,count,bound,margin,status\n";
  char buf[64];
  for (const auto& r : report.rows) {
    os << r.kind << "," << r.ball << "," << r.k << "," << r.t << "," << r.q << "," << r.count;
    std::snprintf(buf, sizeof buf, ",%.17g", r.bound);
    os << buf;
    std::snprintf(buf, sizeof buf, ",%.17g", r.margin);
    os << buf << "," << (r.pass ? "pass" : "fail") << "\n";
  }
  return os.str();
}

}  // namespace diophlab
