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

#include "diophlab/madsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diophlab/error.hpp"
#include "diophlab/fixed.hpp"
#include "diophlab/parallel.hpp"

namespace diophlab {

namespace {

long double down(long double v) { return std::nextafter(v, -std::numeric_limits<long double>::infinity()); }
long double up(long double v) { return std::nextafter(v, std::numeric_limits<long double>::infinity()); }

struct LdInterval {
  long double lo = 0;
  long double hi = 0;
};

LdInterval to_ld(const Interval& v) {
  return {mpfr_get_ld(v.lo(), MPFR_RNDD), mpfr_get_ld(v.hi(), MPFR_RNDU)};
}

Interval from_ld(const LdInterval& v) {
  Interval out(128);
  mpfr_set_ld(out.lo(), v.lo, MPFR_RNDD);
  mpfr_set_ld(out.hi(), v.hi, MPFR_RNDU);
  return out;
}

int64_t sup_norm(const IntVector& j) {
  int64_t m = 0;
  for (int64_t v : j) m = std::max(m, v < 0 ? -v : v);
  return m;
}

// Enclosure of P(j); `zero` is set when some factor vanishes exactly.
class ProductKernel {
 public:
  ProductKernel(const SurdMatrix& a, const Precision& budget) : a_(a), budget_(budget) {
    require(!a.empty() && !a[0].empty(), "matrix must be non-empty");
    for (const auto& row : a) {
      require(row.size() == a[0].size(), "matrix rows must have equal length");
      std::vector<ModOne> fixed;
      for (const auto& v : row) fixed.push_back(mod_one(v));
      rows_.push_back(std::move(fixed));
    }
  }

  int columns() const { return static_cast<int>(a_[0].size()); }

  LdInterval product(const IntVector& j, bool* zero) const {
    *zero = false;
    LdInterval p{1, 1};
    for (size_t u = 0; u < rows_.size(); ++u) {
      ModOne m;
      for (size_t i = 0; i < j.size(); ++i) {
        if (j[i] != 0) m = add(m, scale(rows_[u][i], j[i]));
      }
      DistBound d = distance(m);
      LdInterval f;
      if (d.lo == 0) {
        SurdSum s;
        for (size_t i = 0; i < j.size(); ++i) {
          if (j[i] != 0) s += a_[u][i] * Rational(BigInt(j[i]));
        }
        if (s.is_integer()) {
          *zero = true;
          return {0, 0};
        }
        f = to_ld(s.nearest_int_distance(budget_).evaluate(192));
      } else {
        f = {dist_lo_ld(d), dist_hi_ld(d)};
      }
      p.lo = down(p.lo * f.lo);
      p.hi = up(p.hi * f.hi);
    }
    return p;
  }

 private:
  const SurdMatrix& a_;
  Precision budget_;
  std::vector<std::vector<ModOne>> rows_;
};

// Shell ranges per chunk depend only on the problem size.
std::vector<ChunkRange> shell_chunks(int64_t j_max) {
  const uint64_t per = std::max<uint64_t>(1, static_cast<uint64_t>(j_max) / 64);
  return make_chunks(1, static_cast<uint64_t>(j_max) + 1, per);
}

}  // namespace

uint64_t half_shell_size(int n, int64_t N) {
  if (N == 0) return 0;
  // ((2N+1)^n - (2N-1)^n) / 2
  BigInt a = 1;
  BigInt b = 1;
  for (int i = 0; i < n; ++i) {
    a *= 2 * N + 1;
    b *= 2 * N - 1;
  }
  BigInt h = (a - b) / 2;
  return h.get_ui();
}

Interval mad_functional(const SurdMatrix& a, const IntVector& j, const Rational& omega,
                        long bits, const Precision& budget) {
  require(!a.empty(), "matrix must be non-empty");
  require(j.size() == a[0].size(), "j must have one entry per matrix column");
  const int64_t norm = sup_norm(j);
  require(norm > 0, "j must be nonzero");
  SurdSum product(1L);
  for (const auto& row : a) {
    SurdSum s;
    for (size_t i = 0; i < j.size(); ++i) s += row[i] * Rational(BigInt(j[i]));
    if (s.is_integer()) return Interval(0L, bits + 32);
    product *= s.nearest_int_distance(budget);
  }
  const long prec = bits + 64;
  Interval scale_factor = pow(Interval(BigInt(norm), prec), Interval(omega, prec));
  return scale_factor * product.evaluate(prec);
}

MadDiagnostics estimate_exponent(const SurdMatrix& a, int64_t j_max, int threads,
                                 const Precision& budget) {
  require(j_max >= 2, "estimate_exponent needs J_max >= 2");
  ProductKernel kernel(a, budget);
  const int n = kernel.columns();
  struct Part {
    std::vector<RecordMinimum> records;
    std::optional<IntVector> zero;
    uint64_t evaluated = 0;
  };
  auto chunks = shell_chunks(j_max);
  auto parts = run_chunks<Part>(chunks, threads, [&](const ChunkRange& c) {
    Part part;
    long double best = std::numeric_limits<long double>::infinity();
    for_each_half_shell(n, static_cast<int64_t>(c.begin), static_cast<int64_t>(c.end) - 1,
                        [&](const IntVector& j) {
                          if (part.zero) return;
                          ++part.evaluated;
                          bool zero = false;
                          LdInterval p = kernel.product(j, &zero);
                          if (zero) {
                            part.zero = j;
                            return;
                          }
                          if (p.hi < best) {
                            best = p.lo;
                            part.records.push_back({sup_norm(j), j, p.lo, p.hi});
                          }
                        });
    return part;
  });
  MadDiagnostics out;
  out.j_max = j_max;
  long double best = std::numeric_limits<long double>::infinity();
  for (auto& part : parts) {
    out.evaluated += part.evaluated;
    for (auto& r : part.records) {
      if (r.hi < best) {
        best = r.lo;
        out.records.push_back(r);
      }
    }
    if (part.zero) {
      out.omega_infinite = true;
      out.zero_witness = *part.zero;
      break;
    }
  }
  if (out.omega_infinite) {
    out.fitted_omega = std::numeric_limits<double>::infinity();
    return out;
  }
  // Least squares of -log P against log |j| over the record minima.
  const size_t m = out.records.size();
  if (m >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : out.records) {
      double x = std::log(static_cast<double>(r.norm));
      double y = -std::log(static_cast<double>((r.lo + r.hi) / 2));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double mm = static_cast<double>(m);
    const double den = mm * sxx - sx * sx;
    if (den > 0) {
      const double slope = (mm * sxy - sx * sy) / den;
      const double icpt = (sy - slope * sx) / mm;
      double rss = 0;
      for (const auto& r : out.records) {
        double x = std::log(static_cast<double>(r.norm));
        double y = -std::log(static_cast<double>((r.lo + r.hi) / 2));
        rss += (y - icpt - slope * x) * (y - icpt - slope * x);
      }
      out.fitted_omega = slope;
      if (m > 2) out.omega_stderr = std::sqrt(rss / (mm - 2) / (sxx - sx * sx / mm));
    }
  }
  double inf_val = std::numeric_limits<double>::infinity();
  for (const auto& r : out.records) {
    double v = std::pow(static_cast<double>(r.norm), out.fitted_omega) *
               static_cast<double>((r.lo + r.hi) / 2);
    if (v < inf_val) {
      inf_val = v;
      out.infimum_witness = r.j;
    }
  }
  out.infimum_value = inf_val;
  return out;
}

std::vector<Interval> mad_sum_series(const SurdMatrix& a, const std::vector<int64_t>& grid,
                                     int threads, const Precision& budget) {
  require(!grid.empty(), "mad_sum needs at least one J");
  for (size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] >= 2, "mad_sum needs J >= 2");
    if (i > 0) require(grid[i] > grid[i - 1], "J grid must be strictly increasing");
  }
  ProductKernel kernel(a, budget);
  const int n = kernel.columns();
  const int64_t j_max = grid.back();
  auto chunks = shell_chunks(j_max);
  struct Part {
    std::vector<LdInterval> buckets;
    std::optional<IntVector> zero;
  };
  auto parts = run_chunks<Part>(chunks, threads, [&](const ChunkRange& c) {
    Part part;
    part.buckets.assign(grid.size(), LdInterval{});
    for_each_half_shell(n, static_cast<int64_t>(c.begin), static_cast<int64_t>(c.end) - 1,
                        [&](const IntVector& j) {
                          if (part.zero) return;
                          bool zero = false;
                          LdInterval p = kernel.product(j, &zero);
                          if (zero) {
                            part.zero = j;
                            return;
                          }
                          const int64_t norm = sup_norm(j);
                          size_t b = static_cast<size_t>(
                              std::lower_bound(grid.begin(), grid.end(), norm) - grid.begin());
                          // j and -j contribute equally.
                          LdInterval& acc = part.buckets[b];
                          acc.lo = down(acc.lo + down(2.0L / p.hi));
                          acc.hi = up(acc.hi + up(2.0L / p.lo));
                        });
    return part;
  });
  std::vector<LdInterval> total(grid.size());
  for (auto& part : parts) {
    if (part.zero) {
      std::string js;
      for (int64_t v : *part.zero) js += (js.empty() ? "" : ",") + std::to_string(v);
      fail(ErrorCode::kRationalResonance, "mad_sum: zero product at j = (" + js + ")");
    }
    for (size_t b = 0; b < grid.size(); ++b) {
      total[b].lo = down(total[b].lo + part.buckets[b].lo);
      total[b].hi = up(total[b].hi + part.buckets[b].hi);
    }
  }
  std::vector<Interval> out;
  LdInterval run;
  for (size_t b = 0; b < grid.size(); ++b) {
    run.lo = down(run.lo + total[b].lo);
    run.hi = up(run.hi + total[b].hi);
    out.push_back(from_ld(run));
  }
  return out;
}

Interval mad_sum(const SurdMatrix& a, int64_t J, int threads, const Precision& budget) {
  return mad_sum_series(a, {J}, threads, budget)[0];
}

namespace {

double growth(int64_t J, double omega, int l) {
  return std::pow(static_cast<double>(J), omega) *
         std::pow(std::log(static_cast<double>(J)), static_cast<double>(l));
}

}  // namespace

SumConstantFit fit_sum_constant(const SurdMatrix& a, double omega, int l,
                                const std::vector<int64_t>& grid, int threads) {
  require(omega > 0, "fit_sum_constant: omega must be positive");
  auto sums = mad_sum_series(a, grid, threads);
  SumConstantFit fit;
  for (size_t i = 0; i < grid.size(); ++i) {
    fit.c = std::max(fit.c, sums[i].hi_up() / growth(grid[i], omega, l));
  }
  fit.c *= 1.0 + std::ldexp(1.0, -32);
  for (size_t i = 0; i < grid.size(); ++i) {
    SumBoundRow row;
    row.J = grid[i];
    row.sum = sums[i];
    row.bound = fit.c * growth(grid[i], omega, l);
    row.slack = row.bound - sums[i].hi_up();
    row.ok = row.slack > 0;
    fit.rows.push_back(row);
  }
  return fit;
}

std::vector<SumBoundRow> check_sum_bound(const SurdMatrix& a, double omega, int l, double c,
                                         const std::vector<int64_t>& grid, int threads) {
  auto sums = mad_sum_series(a, grid, threads);
  std::vector<SumBoundRow> rows;
  for (size_t i = 0; i < grid.size(); ++i) {
    SumBoundRow row;
    row.J = grid[i];
    row.sum = sums[i];
    row.bound = c * growth(grid[i], omega, l);
    row.slack = row.bound - sums[i].hi_up();
    row.ok = row.slack > 0;
    rows.push_back(row);
  }
  return rows;
}

Interval progression_exp_sum(const SurdSum& x, int64_t a0, int64_t k, long bits) {
  require(k >= 1, "progression_exp_sum needs k >= 1");
  (void)a0;  // the modulus does not depend on the starting point
  SurdSum frac = x - SurdSum(x.floor());
  const long prec = bits + 64;
  if (frac.is_zero()) return Interval(static_cast<long>(k), prec);
  // |sin(pi k f) / sin(pi f)| with k f reduced mod 1.
  SurdSum kf = frac * Rational(BigInt(k));
  kf -= SurdSum(kf.floor());
  Interval pi = Interval::pi(prec);
  Interval num = abs(sin(pi * kf.evaluate(prec)));
  Interval den = abs(sin(pi * frac.evaluate(prec)));
  return num / den;
}

}  // namespace diophlab
