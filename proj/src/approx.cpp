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


#include "diophlab/approx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "diophlab/error.hpp"
#include "diophlab/parallel.hpp"
#include "diophlab/rng.hpp"
#include "diophlab/ubiquity.hpp"
#include "json.hpp"

namespace diophlab {

ApproxScanner::ApproxScanner(const AffineSubspaceSpec& spec, const ApproxFunction& psi,
                             int64_t Q, int64_t q_min, const Precision& prec)
    : spec_(spec), psi_(psi), Q_(Q), q_min_(q_min), prec_(prec) {
  require(q_min >= 1, "approx: q_min must be positive");
  require(Q >= q_min, "approx: Q must be at least q_min");
  require(Q <= 100000000, "approx: Q exceeds the supported range");
  thresholds_.reserve(static_cast<size_t>(Q - q_min + 1));
  for (int64_t q = q_min; q <= Q; ++q) {
    thresholds_.push_back(fixed_threshold(psi.enclosure(BigInt(q), 192)));
  }
}

ApproxVerdict ApproxScanner::scan(const SurdVector& x) const {
  ApproxVerdict v;
  v.x = x;
  v.q_min = q_min_;
  v.Q = Q_;
  SurdVector l = lift(x, spec_);
  std::vector<ModOne> unit;
  for (const auto& c : l) unit.push_back(mod_one(c));
  std::vector<ModOne> cur;
  for (const auto& u : unit) cur.push_back(scale(u, q_min_));
  for (int64_t q = q_min_; q <= Q_; ++q) {
    const FixedThreshold& thr = thresholds_[static_cast<size_t>(q - q_min_)];
    bool no = false;
    bool unknown = false;
    for (const auto& m : cur) {
      Tri r = less(distance(m), thr);
      if (r == Tri::kNo) {
        no = true;
        break;
      }
      if (r == Tri::kUnknown) unknown = true;
    }
    if (!no && unknown) {
      Real bound = psi_.value(BigInt(q));
      no = false;
      for (const auto& c : l) {
        SurdSum dist = (c * Rational(BigInt(q))).nearest_int_distance(prec_);
        try {
          if (!certified_less(Real(dist), bound, prec_)) {
            no = true;
            break;
          }
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kPrecisionExhausted) throw;
          fail(ErrorCode::kPrecisionExhausted,
               "approx: boundary tie at q = " + std::to_string(q));
        }
      }
    }
    if (!no) {
      v.first_q = q;
      return v;
    }
    for (size_t i = 0; i < cur.size(); ++i) cur[i] = add(cur[i], unit[i]);
  }
  return v;
}

ApproxVerdict is_approximable_upto(const SurdVector& x, const AffineSubspaceSpec& spec,
                                   const ApproxFunction& psi, int64_t Q, int64_t q_min,
                                   const Precision& prec) {
  return ApproxScanner(spec, psi, Q, q_min, prec).scan(x);
}

std::vector<MeasurePoint> empirical_measure(const AffineSubspaceSpec& spec,
                                            const ApproxFunction& psi,
                                            const std::vector<int64_t>& grid,
                                            uint64_t samples, uint64_t seed, int threads,
                                            int64_t q_min, const Precision& prec) {
  require(!grid.empty(), "measure: Q grid must not be empty");
  require(samples >= 1, "measure: need at least one sample");
  for (size_t i = 1; i < grid.size(); ++i) {
    require(grid[i] > grid[i - 1], "measure: Q grid must be strictly increasing");
  }
  ApproxScanner scanner(spec, psi, grid.back(), q_min, prec);
  const int n = spec.n();
  auto chunks = make_chunks(0, samples, 16);
  auto parts = run_chunks<std::vector<uint64_t>>(chunks, threads, [&](const ChunkRange& c) {
    std::vector<uint64_t> hits(grid.size(), 0);
    for (uint64_t i = c.begin; i < c.end; ++i) {
      ApproxVerdict v = scanner.scan(sample_point(seed, i, samples, n).to_surd());
      if (!v.first_q) continue;
      for (size_t g = 0; g < grid.size(); ++g) {
        if (*v.first_q <= grid[g]) ++hits[g];
      }
    }
    return hits;
  });
  std::vector<MeasurePoint> out(grid.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    out[g].Q = grid[g];
    out[g].samples = samples;
    for (const auto& p : parts) out[g].hits += p[g];
    out[g].fraction = static_cast<double>(out[g].hits) / static_cast<double>(samples);
    wilson_interval(out[g].hits, samples, &out[g].ci_low, &out[g].ci_high);
  }
  return out;
}

std::string measure_csv(const std::vector<MeasurePoint>& rows) {
  std::ostringstream os;
  os << "Q,samples,hits,fraction,ci_low,ci_high\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%lld,%llu,%llu,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(r.Q), static_cast<unsigned long long>(r.samples),
                  static_cast<unsigned long long>(r.hits), r.fraction, r.ci_low, r.ci_high);
    os << buf;
  }
  return os.str();
}

SeriesVerdict divergence_classifier(const ApproxFunction& psi, int d, int n, const Rational& s) {
  if (!psi.is_power_log()) {
    fail(ErrorCode::kDomain, "classifier: psi must be in the power-log family");
  }
  require(n >= 1 && n < d, "classifier: need 1 <= n < d");
  require(s >= 0 && s <= n, "classifier: need 0 <= s <= n");
  const Rational w = Rational(d - n) + s;
  const Rational e = Rational(n) - s - psi.tau() * w;
  if (e > -1) return SeriesVerdict::kDiverges;
  if (e == -1 && psi.sigma() * w <= 1) return SeriesVerdict::kDiverges;
  return SeriesVerdict::kConverges;
}

ApproxFunction cantelli_function(int d, int n, const Rational& s, const Rational& eps) {
  require(eps > 0, "cantelli: eps must be positive");
  const Rational w = Rational(d - n) + s;
  Rational tau = Rational(n + 1) - s;
  tau /= w;
  tau += eps;
  return ApproxFunction::power(tau);
}

std::string verdict_name(SeriesVerdict v) {
  return v == SeriesVerdict::kDiverges ? "diverges" : "converges";
}

CondensationReport condensation_check(const ApproxFunction& psi, int d, int n,
                                      const Rational& s, int64_t k, int T) {
  if (!psi.is_power_log()) {
    fail(ErrorCode::kDomain, "condensation: psi must be in the power-log family");
  }
  require(k >= 2, "condensation: k must be at least 2");
  require(T >= 0, "condensation: T must be non-negative");
  CondensationReport rep;
  rep.T = T;
  const long double lk = std::log(static_cast<long double>(k));
  const long double w = static_cast<long double>(d - n) + static_cast<long double>(s.get_d());
  const long double ns = static_cast<long double>(n) - static_cast<long double>(s.get_d());
  const long double lc = std::log(static_cast<long double>(psi.c().get_d()));
  const long double tau = static_cast<long double>(psi.tau().get_d());
  const long double sigma = static_cast<long double>(psi.sigma().get_d());
  long double acc = -INFINITY;
  for (int t = 1; t <= T; ++t) {
    const long double L = t * lk;
    const long double log_k1 = L + std::log1p(std::exp(-L));
    const long double log_psi = lc - tau * L - sigma * std::log(log_k1);
    const long double lt = L + w * log_psi + ns * L;
    rep.log_terms.push_back(static_cast<double>(lt));
    acc = acc == -INFINITY ? lt : std::max(acc, lt) + std::log1p(std::exp(-std::fabs(acc - lt)));
    rep.log_partial.push_back(static_cast<double>(acc));
  }
  if (T < 8) return rep;
  // Least squares for (a, g, p) on t in [T/2, T].
  long double m[3][4] = {};
  for (int t = (T + 1) / 2; t <= T; ++t) {
    const long double f[3] = {1.0L, static_cast<long double>(t), std::log(static_cast<long double>(t))};
    const long double y = rep.log_terms[t - 1];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] += f[i] * f[j];
      m[i][3] += f[i] * y;
    }
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    }
    for (int j = 0; j < 4; ++j) std::swap(m[c][j], m[piv][j]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const long double f = m[r][c] / m[c][c];
      for (int j = 0; j < 4; ++j) m[r][j] -= f * m[c][j];
    }
  }
  const long double g = m[1][3] / m[1][1];
  const long double p = m[2][3] / m[2][2];
  rep.growth = static_cast<double>(g);
  rep.log_power = static_cast<double>(p);
  const long double tol = 1e-6L;
  if (g > tol) {
    rep.verdict = SeriesVerdict::kDiverges;
  } else if (g < -tol) {
    rep.verdict = SeriesVerdict::kConverges;
  } else {
    rep.verdict = p >= -1 - tol ? SeriesVerdict::kDiverges : SeriesVerdict::kConverges;
  }
  return rep;
}

double dimension_formula(int n, int d, double tau) {
  return n - (tau * d - 1) / (tau + 1);
}

namespace {

struct BoxGeometry {
  int n = 1;
  int m = 0;  // codimension; 0 for the line
  std::vector<ModOne> shift;
  std::vector<std::vector<SurdSum>> tilt;  // n x m
  std::vector<std::vector<ModOne>> tilt_fixed;
  SurdVector shift_exact;
  Rational tau;
  long double tilt_norm = 0;
  SurdSum tilt_norm_exact;
};

struct ScaleResult {
  int64_t q_block = 0;
  uint64_t count = 0;
};

// q^-tau + q w h / 2 with h = 2^-j.
Real slack_bound(int64_t q, const Rational& tau, const SurdSum& w, int j) {
  Rational hq(BigInt(q), BigInt(1) << (j + 1));
  hq.canonicalize();
  return real_pow(Real(static_cast<long>(q)), -tau) + Real(w * hq);
}

ScaleResult count_scale(const BoxGeometry& g, int j, const DimensionOptions& opts,
                        const Precision& prec) {
  require(j >= 1 && j <= 60, "dimension: scale exponent out of range");
  require(g.n * j <= 62, "dimension: box index exceeds 62 bits");
  const double tau = g.tau.get_d();
  const int64_t qh = static_cast<int64_t>(std::floor(std::pow(2.0, j / (1.0 + tau))));
  require(qh <= opts.q_cap, "dimension: block height exceeds q_cap");
  const int64_t q_lo = qh / 2 + 1;
  const int64_t nboxes = int64_t(1) << j;
  const long prec_bits = 192;
  // Tilt entries scaled by 2^-(j+1), for centers (2b+1) 2^-(j+1).
  std::vector<std::vector<ModOne>> tilt_scaled(g.n, std::vector<ModOne>(g.m));
  for (int i = 0; i < g.n; ++i) {
    for (int v = 0; v < g.m; ++v) {
      tilt_scaled[i][v] = mod_one(g.tilt[i][v] / Rational(BigInt(1) << (j + 1)));
    }
  }
  const SurdSum wn = g.tilt_norm_exact * Rational(g.n);
  const Interval wn_iv = wn.evaluate(prec_bits);
  auto chunks = make_chunks(static_cast<uint64_t>(std::max<int64_t>(q_lo, 1)),
                            static_cast<uint64_t>(qh) + 1, 64);
  auto parts = run_chunks<std::vector<int64_t>>(chunks, opts.threads, [&](const ChunkRange& c) {
    std::vector<int64_t> hits;
    std::vector<int64_t> p(g.n);
    std::vector<std::vector<int64_t>> boxes(g.n);
    std::vector<size_t> pos(g.n);
    for (uint64_t uq = c.begin; uq < c.end; ++uq) {
      const int64_t q = static_cast<int64_t>(uq);
      Interval qpow = pow(Interval(q, prec_bits), Interval(Rational(-g.tau), prec_bits));
      Interval hq(Rational(BigInt(q), BigInt(1) << (j + 1)), prec_bits);
      Interval t1 = qpow + hq;
      Interval t2 = qpow + hq * wn_iv;
      // t1 2^(j+1) as long double bounds for integer numerators.
      Interval t1s = t1 * Interval(BigInt(BigInt(1) << (j + 1)), prec_bits);
      const long double t1s_lo = mpfr_get_ld(t1s.lo(), MPFR_RNDD);
      const long double t1s_hi = mpfr_get_ld(t1s.hi(), MPFR_RNDU);
      const long double t1_hi = mpfr_get_ld(t1.hi(), MPFR_RNDU);
      FixedThreshold t2_fixed;
      long double pre = 0;
      std::optional<Real> t1_real, t2_real;
      if (g.m > 0) {
        t2_fixed = fixed_threshold(t2);
        pre = mpfr_get_ld(t2.hi(), MPFR_RNDU) + g.tilt_norm * g.n * t1_hi;
        pre *= 1 + 1e-9L;
      }
      std::fill(p.begin(), p.end(), 0);
      while (true) {
        bool candidate = true;
        for (int v = 0; v < g.m && candidate; ++v) {
          ModOne mv = scale(g.shift[v], q);
          for (int i = 0; i < g.n; ++i) {
            if (p[i] != 0) mv = add(mv, scale(g.tilt_fixed[i][v], p[i]));
          }
          if (dist_lo_ld(distance(mv)) > pre) candidate = false;
        }
        bool any = candidate;
        for (int i = 0; i < g.n && any; ++i) {
          boxes[i].clear();
          // |q (2b+1) - p 2^(j+1)| < t1 2^(j+1).
          const long double centre = (static_cast<long double>(p[i]) / q) * nboxes - 0.5L;
          const long double span = t1_hi / q * nboxes;
          const int64_t b_lo = std::max<int64_t>(0, static_cast<int64_t>(std::floor(centre - span)) - 1);
          const int64_t b_hi = std::min<int64_t>(nboxes - 1, static_cast<int64_t>(std::ceil(centre + span)) + 1);
          for (int64_t b = b_lo; b <= b_hi; ++b) {
            const __int128 num = static_cast<__int128>(q) * (2 * b + 1) -
                                 (static_cast<__int128>(p[i]) << (j + 1));
            const __int128 a = num < 0 ? -num : num;
            const long double al = static_cast<long double>(a);
            bool in;
            if (al < t1s_lo) {
              in = true;
            } else if (al >= t1s_hi) {
              in = false;
            } else {
              if (!t1_real) t1_real = slack_bound(q, g.tau, SurdSum(1L), j);
              Rational off(BigInt(std::to_string(static_cast<long long>(a))), BigInt(1) << (j + 1));
              off.canonicalize();
              in = certified_less(Real(off), *t1_real, prec);
            }
            if (in) boxes[i].push_back(b);
          }
          if (boxes[i].empty()) any = false;
        }
        if (any) {
          std::fill(pos.begin(), pos.end(), 0);
          while (true) {
            bool hit = true;
            for (int v = 0; v < g.m && hit; ++v) {
              ModOne mv = scale(g.shift[v], q);
              for (int i = 0; i < g.n; ++i) {
                mv = add(mv, scale(tilt_scaled[i][v], q * (2 * boxes[i][pos[i]] + 1)));
              }
              Tri r = less(distance(mv), t2_fixed);
              if (r == Tri::kNo) hit = false;
              if (r == Tri::kUnknown) {
                SurdSum val = g.shift_exact[v] * Rational(BigInt(q));
                for (int i = 0; i < g.n; ++i) {
                  Rational cq(BigInt(q * (2 * boxes[i][pos[i]] + 1)), BigInt(1) << (j + 1));
                  cq.canonicalize();
                  val += g.tilt[i][v] * cq;
                }
                if (!t2_real) t2_real = slack_bound(q, g.tau, wn, j);
                hit = certified_less(Real(val.nearest_int_distance(prec)), *t2_real, prec);
              }
            }
            if (hit) {
              int64_t code = 0;
              for (int i = g.n - 1; i >= 0; --i) code = (code << j) | boxes[i][pos[i]];
              hits.push_back(code);
            }
            int i = g.n - 1;
            while (i >= 0 && pos[i] + 1 == boxes[i].size()) {
              pos[i] = 0;
              --i;
            }
            if (i < 0) break;
            ++pos[i];
          }
        }
        int i = g.n - 1;
        while (i >= 0 && p[i] == q) {
          p[i] = 0;
          --i;
        }
        if (i < 0) break;
        ++p[i];
      }
    }
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    return hits;
  });
  std::vector<int64_t> all;
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return {qh, all.size()};
}

DimensionEstimate estimate(const BoxGeometry& g, int d, const DimensionOptions& opts,
                           const Precision& prec) {
  require(opts.scale_lo >= 1 && opts.scale_lo <= opts.scale_hi, "dimension: bad scale range");
  require(opts.fit_lo >= opts.scale_lo && opts.fit_hi <= opts.scale_hi &&
              opts.fit_hi - opts.fit_lo >= 1,
          "dimension: fit range must hold two scales inside the scale range");
  DimensionEstimate e;
  e.tau = g.tau.get_d();
  e.formula_value = dimension_formula(g.n, d, e.tau);
  for (int j = opts.scale_lo; j <= opts.scale_hi; ++j) {
    ScaleResult r = count_scale(g, j, opts, prec);
    e.scales.push_back(std::ldexp(1.0, -j));
    e.q_block.push_back(r.q_block);
    e.counts.push_back(r.count);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int j = opts.fit_lo; j <= opts.fit_hi; ++j) {
    const uint64_t c = e.counts[j - opts.scale_lo];
    require(c > 0, "dimension: empty box count inside the fit range");
    const double x = j * std::log(2.0);
    const double y = std::log(static_cast<double>(c));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  e.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double icpt = (sy - e.slope * sx) / m;
  for (int j = opts.fit_lo; j <= opts.fit_hi; ++j) {
    const double y = std::log(static_cast<double>(e.counts[j - opts.scale_lo]));
    e.residuals.push_back(y - icpt - e.slope * j * std::log(2.0));
  }
  return e;
}

}  // namespace

DimensionEstimate box_dimension(const AffineSubspaceSpec& spec, const Rational& tau,
                                const DimensionOptions& opts, const Precision& prec) {
  require(tau * spec.d() >= 1, "dimension: need tau >= 1/d");
  BoxGeometry g;
  g.n = spec.n();
  g.m = spec.codim();
  g.tau = tau;
  g.tilt = spec.tilt();
  for (const auto& row : g.tilt) {
    std::vector<ModOne> fr;
    for (const auto& v : row) fr.push_back(mod_one(v));
    g.tilt_fixed.push_back(std::move(fr));
  }
  g.shift_exact = spec.shift();
  for (const auto& v : spec.shift()) g.shift.push_back(mod_one(v));
  g.tilt_norm_exact = spec.tilt_norm();
  g.tilt_norm = static_cast<long double>(g.tilt_norm_exact.evaluate(128).hi_up());
  return estimate(g, spec.d(), opts, prec);
}

DimensionEstimate box_dimension_line(const Rational& tau, const DimensionOptions& opts,
                                     const Precision& prec) {
  require(tau >= 1, "dimension: need tau >= 1 on the line");
  BoxGeometry g;
  g.n = 1;
  g.m = 0;
  g.tau = tau;
  g.tilt.assign(1, {});
  return estimate(g, 1, opts, prec);
}

std::string dimension_json(const DimensionEstimate& e) {
  nlohmann::ordered_json j;
  j["tau"] = e.tau;
  j["scales"] = e.scales;
  j["q_block"] = e.q_block;
  j["counts"] = e.counts;
  j["slope"] = e.slope;
  j["formula_value"] = e.formula_value;
  j["residuals"] = e.residuals;
  return j.dump();
}

}  // namespace diophlab
