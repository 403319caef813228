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


#include "diophlab/ubiquity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "diophlab/closeness.hpp"
#include "diophlab/error.hpp"
#include "diophlab/parallel.hpp"
#include "diophlab/rng.hpp"
#include "json.hpp"

namespace diophlab {

namespace {

BigInt power(int64_t k, int e) {
  BigInt v;
  mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(e));
  return v;
}

u128 to_u128(const BigInt& v) {
  BigInt top = v >> 64;
  BigInt bottom;
  mpz_fdiv_r_2exp(bottom.get_mpz_t(), v.get_mpz_t(), 64);
  return (static_cast<u128>(mpz_get_ui(top.get_mpz_t())) << 64) |
         static_cast<u128>(mpz_get_ui(bottom.get_mpz_t()));
}

// y = ip + (fh + e) 2^-128 with 0 <= e < err.
struct FixedCoord {
  int64_t ip = 0;
  u128 fh = 0;
  u128 err = 0;
};

FixedCoord fixed_coord(const Rational& y) {
  FixedCoord c;
  BigInt ip;
  mpz_fdiv_q(ip.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  require(ip.fits_slong_p(), "coordinate out of range");
  c.ip = ip.get_si();
  Rational f = (y - Rational(ip)) * Rational(BigInt(1) << 128);
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), f.get_num_mpz_t(), f.get_den_mpz_t());
  c.fh = to_u128(fl);
  c.err = f.get_den() == 1 ? 0 : 1;
  return c;
}

// a * b as (high 64 bits, low 128 bits).
inline void mul_128_64(u128 a, uint64_t b, uint64_t* high, u128* low) {
  const u128 a0 = static_cast<uint64_t>(a);
  const u128 a1 = a >> 64;
  const u128 p0 = a0 * b;
  const u128 p1 = a1 * b;
  const u128 mid = (p0 >> 64) + static_cast<uint64_t>(p1);
  *low = (mid << 64) | static_cast<uint64_t>(p0);
  *high = static_cast<uint64_t>((p1 >> 64) + (mid >> 64));
}

bool within(const Rational& y, int64_t q, int64_t p, const Real& r, const Precision& prec) {
  Rational off = y * Rational(BigInt(q)) - Rational(BigInt(p));
  if (off < 0) off = -off;
  return certified_less(Real(off), r, prec);
}

struct Level {
  int64_t q_lo = 0;  // exclusive
  int64_t q_hi = 0;
  std::vector<FixedThreshold> radius_fixed;
  std::vector<Real> radius;
  std::vector<bool> generic;
  std::vector<FixedThreshold> psi_fixed;
  std::vector<Real> half_psi;
};

}  // namespace

std::vector<Rational> ResonantPoint::point() const {
  std::vector<Rational> out;
  for (int64_t v : p_hat.p) {
    Rational r(BigInt(v), BigInt(p_hat.q));
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

std::vector<ResonantPoint> resonant_points(const AffineSubspaceSpec& spec,
                                           const ApproxFunction& psi, int64_t q_max,
                                           const StripIndex& origin, const Precision& prec) {
  const int n = spec.n();
  require(q_max >= 1, "resonant_points: q_max must be positive");
  StripIndex v = origin.empty() ? StripIndex(n, 0) : origin;
  require(static_cast<int>(v.size()) == n, "resonant_points: origin must have n entries");
  ClosenessKernel kernel(spec, prec);
  std::vector<ResonantPoint> out;
  for (int64_t q = 1; q <= q_max; ++q) {
    Real half = psi.value(BigInt(q)) * Real(Rational(1, 2));
    FixedThreshold fixed = fixed_threshold(half);
    HattedVector hv{q, std::vector<int64_t>(n)};
    for (int i = 0; i < n; ++i) hv.p[i] = q * v[i];
    while (true) {
      if (kernel.test(hv, fixed, half)) {
        ResonantPoint rp;
        rp.p_hat = hv;
        rp.weight = q;
        rp.closeness = kernel.closeness(hv).approx();
        out.push_back(std::move(rp));
      }
      int i = n - 1;
      while (i >= 0 && hv.p[i] == q * (v[i] + 1)) {
        hv.p[i] = q * v[i];
        --i;
      }
      if (i < 0) break;
      ++hv.p[i];
    }
  }
  return out;
}

std::string resonant_csv(const std::vector<ResonantPoint>& points, const ApproxFunction& psi,
                         int d, int n) {
  std::ostringstream os;
  os << "q";
  for (int i = 0; i < n; ++i) os << ",p" << (i + 1);
  os << ",closeness,rho\n";
  char buf[64];
  for (const auto& rp : points) {
    os << rp.p_hat.q;
    for (int64_t v : rp.p_hat.p) os << "," << v;
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g", rp.closeness,
                  rho(BigInt(rp.p_hat.q), psi, d, n).approx());
    os << buf << "\n";
  }
  return os.str();
}

Real rho(const BigInt& q, const ApproxFunction& psi, int d, int n) {
  require(q >= 1, "rho: q must be positive");
  require(n >= 1 && n < d, "rho: need 1 <= n < d");
  const Rational e(d - n, n);
  return real_pow(Real(2L), e) /
         (real_pow(Real(Rational(q)), Rational(n + 1, n)) * real_pow(psi.value(q), e));
}

Interval min_k(int n, int d) {
  require(n >= 1 && n < d, "min_k: need 1 <= n < d");
  const long prec = 128;
  return pow(Interval(2L, prec), Interval(Rational(n + d, n + 1), prec)) *
         pow(Interval(3L, prec), Interval(Rational(n + d + 2, n + 1), prec));
}

void wilson_interval(uint64_t hits, uint64_t n, double* lo, double* hi) {
  if (n == 0) {
    *lo = 0;
    *hi = 1;
    return;
  }
  const double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double den = 1 + z * z / nn;
  const double centre = (p + z * z / (2 * nn)) / den;
  const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / den;
  *lo = std::max(0.0, centre - half);
  *hi = std::min(1.0, centre + half);
}

CoverReport covering_fraction(const Ball& ball, int64_t k, int t, const ApproxFunction& psi,
                              const AffineSubspaceSpec& spec, const CoverOptions& opts,
                              const Precision& prec) {
  const int n = spec.n();
  require(k >= 2 && t >= 1, "cover: need k >= 2 and t >= 1");
  require(opts.samples >= 1, "cover: need at least one sample");
  require(opts.rho_scale > 0, "cover: rho scale must be positive");
  require(static_cast<int>(ball.center.size()) == n, "cover: ball center must have n entries");
  require(ball.radius > 0, "cover: ball radius must be positive");
  std::vector<Rational> lo(n);
  for (int i = 0; i < n; ++i) {
    require(ball.center[i].is_rational(), "cover: ball center must be rational");
    lo[i] = ball.center[i].rational_part() - ball.radius;
  }
  const BigInt kt = power(k, t);
  require(kt < BigInt(1) << 40, "cover: k^t exceeds the supported range");
  Level level;
  level.q_lo = power(k, t - 1).get_si();
  level.q_hi = kt.get_si();
  const Real base_rho = rho(kt, psi, spec.d(), n) * Real(opts.rho_scale);
  const Interval base_iv = base_rho.eval(192);
  const Interval quarter(Rational(1, 4), 64);
  for (int64_t q = level.q_lo + 1; q <= level.q_hi; ++q) {
    Interval r = base_iv * Interval(q, 192);
    level.radius_fixed.push_back(fixed_threshold(r));
    level.radius.push_back(base_rho * Real(static_cast<long>(q)));
    level.generic.push_back(!certainly_less(r, quarter));
    Real half = psi.value(BigInt(q)) * Real(Rational(1, 2));
    level.psi_fixed.push_back(fixed_threshold(half));
    level.half_psi.push_back(std::move(half));
  }
  ClosenessKernel kernel(spec, prec);
  const Rational side = ball.radius * 2;

  auto sample_hit = [&](uint64_t index) {
    DyadicPoint u = sample_point(opts.seed, index, opts.samples, n);
    std::vector<Rational> y(n);
    std::vector<FixedCoord> fc(n);
    for (int i = 0; i < n; ++i) {
      y[i] = lo[i] + side * u.coord(i);
      fc[i] = fixed_coord(y[i]);
    }
    HattedVector hv{0, std::vector<int64_t>(n)};
    std::vector<std::vector<int64_t>> ranges(n);
    for (int64_t q = level.q_lo + 1; q <= level.q_hi; ++q) {
      const size_t idx = static_cast<size_t>(q - level.q_lo - 1);
      hv.q = q;
      if (!level.generic[idx]) {
        bool ok = true;
        bool unknown = false;
        for (int i = 0; i < n && ok; ++i) {
          uint64_t high;
          u128 low;
          mul_128_64(fc[i].fh, static_cast<uint64_t>(q), &high, &low);
          ModOne m{low, fc[i].err * static_cast<u128>(q), true};
          Tri r = less(distance(m), level.radius_fixed[idx]);
          if (r == Tri::kNo) ok = false;
          if (r == Tri::kUnknown) unknown = true;
          hv.p[i] = q * fc[i].ip + static_cast<int64_t>(high) + (low >= kHalf ? 1 : 0);
        }
        if (!ok) continue;
        if (unknown) {
          for (int i = 0; i < n && ok; ++i) ok = within(y[i], q, hv.p[i], level.radius[idx], prec);
          if (!ok) continue;
        }
        bool inside = true;
        for (int i = 0; i < n; ++i) inside = inside && hv.p[i] >= 0 && hv.p[i] <= q;
        if (inside && kernel.test(hv, level.psi_fixed[idx], level.half_psi[idx])) return true;
        continue;
      }
      // Several p per coordinate can be close.
      const double r_hi = level.radius[idx].eval(64).hi_up();
      bool empty = false;
      for (int i = 0; i < n; ++i) {
        ranges[i].clear();
        const double c = y[i].get_d() * static_cast<double>(q);
        const int64_t a = std::max<int64_t>(0, static_cast<int64_t>(std::floor(c - r_hi)) - 1);
        const int64_t b = std::min<int64_t>(q, static_cast<int64_t>(std::ceil(c + r_hi)) + 1);
        for (int64_t p = a; p <= b; ++p) {
          if (within(y[i], q, p, level.radius[idx], prec)) ranges[i].push_back(p);
        }
        if (ranges[i].empty()) empty = true;
      }
      if (empty) continue;
      std::vector<size_t> pos(n, 0);
      while (true) {
        for (int i = 0; i < n; ++i) hv.p[i] = ranges[i][pos[i]];
        if (kernel.test(hv, level.psi_fixed[idx], level.half_psi[idx])) return true;
        int i = n - 1;
        while (i >= 0 && pos[i] + 1 == ranges[i].size()) {
          pos[i] = 0;
          --i;
        }
        if (i < 0) break;
        ++pos[i];
      }
    }
    return false;
  };

  auto chunks = make_chunks(0, opts.samples, 64);
  auto parts = run_chunks<uint64_t>(chunks, opts.threads, [&](const ChunkRange& c) {
    uint64_t hits = 0;
    for (uint64_t i = c.begin; i < c.end; ++i) hits += sample_hit(i) ? 1 : 0;
    return hits;
  });
  CoverReport rep;
  rep.k = k;
  rep.t = t;
  rep.ball = ball;
  rep.samples = opts.samples;
  for (uint64_t h : parts) rep.hits += h;
  rep.fraction = static_cast<double>(rep.hits) / static_cast<double>(rep.samples);
  wilson_interval(rep.hits, rep.samples, &rep.ci_low, &rep.ci_high);
  rep.half_width = (rep.ci_high - rep.ci_low) / 2;
  rep.rho = base_rho.approx();
  rep.seed = opts.seed;
  return rep;
}

std::string cover_json(const CoverReport& r) {
  nlohmann::ordered_json j;
  j["k"] = r.k;
  j["t"] = r.t;
  std::vector<std::string> c;
  for (const auto& v : r.ball.center) c.push_back(to_exact_real(v).to_string());
  j["ball_center"] = c;
  j["ball_radius"] = r.ball.radius.get_str();
  j["samples"] = r.samples;
  j["hits"] = r.hits;
  j["fraction"] = r.fraction;
  j["ci_low"] = r.ci_low;
  j["ci_high"] = r.ci_high;
  j["half_width"] = r.half_width;
  j["rho"] = r.rho;
  j["seed"] = r.seed;
  return j.dump();
}

RegularityReport regularity_check(const ApproxFunction& psi, const AffineSubspaceSpec& spec,
                                  int64_t k, const std::vector<int>& t_range) {
  require(k >= 2, "regularity: k must be at least 2");
  RegularityReport rep;
  const Real inv_k(Rational(1, k));
  for (int t : t_range) {
    require(t >= 0, "regularity: levels must be non-negative");
    Real a = psi_capital(power(k, t + 1), psi, spec);
    Real b = psi_capital(power(k, t), psi, spec);
    Real ratio = a / b;
    rep.ratios.push_back(ratio.approx());
    if (!certified_leq(ratio, inv_k)) rep.ok = false;
  }
  return rep;
}

}  // namespace diophlab
