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


#include "diophlab/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "diophlab/error.hpp"
#include "diophlab/rng.hpp"
#include "json.hpp"

namespace diophlab {

namespace {

using LdMatrix = std::vector<std::vector<long double>>;

Real form_value(const std::vector<Real>& row, const IntPoint& x) {
  bool exact = true;
  for (const auto& v : row) exact = exact && v.is_exact();
  if (exact) {
    SurdSum s;
    for (size_t j = 0; j < x.size(); ++j) {
      if (x[j] != 0) s += row[j].exact() * Rational(BigInt(x[j]));
    }
    return Real(s);
  }
  Real s(0L);
  for (size_t j = 0; j < x.size(); ++j) {
    if (x[j] != 0) s = s + row[j] * Real(static_cast<long>(x[j]));
  }
  return s;
}

Interval det_interval(const std::vector<std::vector<Interval>>& m, std::vector<int>& cols,
                      size_t row, long prec) {
  const size_t k = m.size();
  if (row == k) return Interval(1L, prec);
  Interval acc(0L, prec);
  int sign = 1;
  for (size_t c = 0; c < cols.size(); ++c) {
    const int col = cols[c];
    if (col < 0) continue;
    cols[c] = -1;
    Interval minor = det_interval(m, cols, row + 1, prec);
    cols[c] = col;
    Interval term = m[row][col] * minor;
    acc = sign > 0 ? acc + term : acc - term;
    sign = -sign;
  }
  return acc;
}

void gram_schmidt(const LdMatrix& b, LdMatrix& mu, std::vector<long double>& norms) {
  const size_t k = b.size();
  LdMatrix star = b;
  mu.assign(k, std::vector<long double>(k, 0));
  norms.assign(k, 0);
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < i; ++j) {
      long double dot = 0;
      for (size_t t = 0; t < b[i].size(); ++t) dot += b[i][t] * star[j][t];
      mu[i][j] = norms[j] > 0 ? dot / norms[j] : 0;
      for (size_t t = 0; t < b[i].size(); ++t) star[i][t] -= mu[i][j] * star[j][t];
    }
    long double nn = 0;
    for (long double v : star[i]) nn += v * v;
    norms[i] = nn;
  }
}

// LLL on the rows of b; u tracks the integer transforms (b = u M^T).
void lll(LdMatrix& b, std::vector<IntPoint>& u) {
  const size_t k = b.size();
  LdMatrix mu;
  std::vector<long double> norms;
  gram_schmidt(b, mu, norms);
  size_t j = 1;
  for (int iter = 0; j < k && iter < 100000; ++iter) {
    for (size_t l = j; l-- > 0;) {
      const long double r = std::nearbyint(mu[j][l]);
      if (r != 0) {
        const int64_t ri = static_cast<int64_t>(r);
        for (size_t t = 0; t < k; ++t) {
          b[j][t] -= r * b[l][t];
          u[j][t] -= ri * u[l][t];
        }
        gram_schmidt(b, mu, norms);
      }
    }
    if (norms[j] >= (0.99L - mu[j][j - 1] * mu[j][j - 1]) * norms[j - 1]) {
      ++j;
    } else {
      std::swap(b[j], b[j - 1]);
      std::swap(u[j], u[j - 1]);
      gram_schmidt(b, mu, norms);
      j = std::max<size_t>(j - 1, 1);
    }
  }
}

struct Enumerator {
  const LdMatrix& mu;
  const std::vector<long double>& norms;
  long double radius2;
  uint64_t budget;
  uint64_t nodes = 0;
  std::vector<IntPoint> found;
  IntPoint y;

  void run(int j, long double partial) {
    if (++nodes > budget) return;
    if (j < 0) {
      bool nonzero = false;
      for (int64_t v : y) nonzero = nonzero || v != 0;
      if (nonzero) found.push_back(y);
      return;
    }
    long double c = 0;
    for (size_t l = j + 1; l < y.size(); ++l) c -= mu[l][j] * static_cast<long double>(y[l]);
    if (norms[j] <= 0) return;
    const long double rem = radius2 - partial;
    if (rem < 0) return;
    const long double w = std::sqrt(rem / norms[j]);
    const int64_t lo = static_cast<int64_t>(std::ceil(c - w));
    const int64_t hi = static_cast<int64_t>(std::floor(c + w));
    for (int64_t v = lo; v <= hi; ++v) {
      const long double diff = static_cast<long double>(v) - c;
      y[j] = v;
      run(j - 1, partial + norms[j] * diff * diff);
      if (nodes > budget) break;
    }
    y[j] = 0;
  }
};

LdMatrix scaled_matrix(const LinearFormsSystem& sys) {
  const int k = sys.size();
  LdMatrix m(k, std::vector<long double>(k));
  for (int i = 0; i < k; ++i) {
    Interval c = sys.bounds[i].eval(128);
    require(c.positive(), "linear forms: bounds must be positive");
    for (int j = 0; j < k; ++j) {
      m[i][j] = static_cast<long double>(sys.beta[i][j].eval(128).mid()) /
                static_cast<long double>(c.mid());
    }
  }
  return m;
}

long double scaled_sup(const LdMatrix& m, const IntPoint& x) {
  long double best = 0;
  for (size_t i = 0; i < m.size(); ++i) {
    long double s = 0;
    for (size_t j = 0; j < x.size(); ++j) s += m[i][j] * static_cast<long double>(x[j]);
    best = std::max(best, std::fabs(s));
  }
  return best;
}

constexpr long double kSlack = 1e-9L;

}  // namespace

bool LinearFormsSystem::satisfied_by(const IntPoint& x, const Precision& budget) const {
  const int k = size();
  require(static_cast<int>(x.size()) == k, "linear forms: point has the wrong length");
  try {
    for (int i = 0; i < k; ++i) {
      Real f = form_value(beta[i], x);
      Real neg_c = Real(0L) - bounds[i];
      if (i + 1 < k) {
        if (!certified_less(f, bounds[i], budget) || !certified_less(neg_c, f, budget)) {
          return false;
        }
      } else {
        if (!certified_leq(f, bounds[i], budget) || !certified_leq(neg_c, f, budget)) {
          return false;
        }
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kPrecisionExhausted) throw;
    return false;
  }
  return true;
}

std::string det_status_name(DetStatus s) {
  switch (s) {
    case DetStatus::kCertified: return "certified";
    case DetStatus::kTie: return "tie";
    case DetStatus::kViolated: return "violated";
    case DetStatus::kUndecided: return "undecided";
  }
  return "undecided";
}

DetCheck check_determinant(const LinearFormsSystem& sys, long bits) {
  const int k = sys.size();
  require(k >= 1 && k <= 8, "linear forms: size must be between 1 and 8");
  require(static_cast<int>(sys.beta.size()) == k, "linear forms: beta must be square");
  for (const auto& row : sys.beta) {
    require(static_cast<int>(row.size()) == k, "linear forms: beta must be square");
  }
  std::vector<std::vector<Interval>> m;
  for (const auto& row : sys.beta) {
    std::vector<Interval> r;
    for (const auto& v : row) r.push_back(v.eval(bits));
    m.push_back(std::move(r));
  }
  std::vector<int> cols(k);
  for (int i = 0; i < k; ++i) cols[i] = i;
  DetCheck out;
  out.det = abs(det_interval(m, cols, 0, bits));
  out.product = Interval(1L, bits);
  for (const auto& c : sys.bounds) out.product = out.product * c.eval(bits);
  if (certainly_leq(out.det, out.product)) {
    out.status = DetStatus::kCertified;
  } else if (certainly_less(out.product, out.det)) {
    out.status = DetStatus::kViolated;
  } else if (hull(out.det, out.product).width_at_most(64)) {
    out.status = DetStatus::kTie;
  }
  return out;
}

std::vector<IntPoint> box_solutions(const LinearFormsSystem& sys, int64_t radius,
                                    const Precision& prec) {
  const int k = sys.size();
  LdMatrix m = scaled_matrix(sys);
  std::vector<IntPoint> out;
  IntPoint x(k, -radius);
  while (true) {
    bool nonzero = false;
    for (int64_t v : x) nonzero = nonzero || v != 0;
    if (nonzero && scaled_sup(m, x) <= 1 + kSlack && sys.satisfied_by(x, prec)) {
      out.push_back(x);
    }
    int i = k - 1;
    while (i >= 0 && x[i] == radius) {
      x[i] = -radius;
      --i;
    }
    if (i < 0) break;
    ++x[i];
  }
  return out;
}

int64_t solution_box_radius(const LinearFormsSystem& sys) {
  const int k = sys.size();
  std::vector<std::vector<long double>> inv(k, std::vector<long double>(k, 0));
  {
    LdMatrix a(k, std::vector<long double>(2 * k, 0));
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) a[i][j] = static_cast<long double>(sys.beta[i][j].eval(128).mid());
      a[i][k + i] = 1;
    }
    for (int c = 0; c < k; ++c) {
      int piv = c;
      for (int r = c + 1; r < k; ++r) {
        if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
      }
      if (a[piv][c] == 0) fail(ErrorCode::kSolverIncomplete, "linear forms: singular system");
      std::swap(a[piv], a[c]);
      for (int r = 0; r < k; ++r) {
        if (r == c) continue;
        long double f = a[r][c] / a[c][c];
        for (int t = 0; t < 2 * k; ++t) a[r][t] -= f * a[c][t];
      }
    }
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) inv[i][j] = a[i][k + j] / a[i][i];
    }
  }
  long double rad = 0;
  for (int j = 0; j < k; ++j) {
    long double s = 0;
    for (int i = 0; i < k; ++i) s += std::fabs(inv[j][i]) * sys.bounds[i].eval(64).hi_up();
    rad = std::max(rad, s);
  }
  return static_cast<int64_t>(std::floor(rad * (1 + 1e-6L))) + 1;
}

LinearFormsSystem random_certified_system(uint64_t seed, uint64_t index, int k,
                                          int64_t max_radius) {
  require(k >= 1 && k <= 8, "random system: k must lie in [1, 8]");
  static const long kRadicands[] = {2, 3, 5, 6, 7};
  Stream s(seed, index);
  while (true) {
    LinearFormsSystem sys;
    sys.beta.assign(k, std::vector<Real>(k));
    for (auto& row : sys.beta) {
      for (auto& v : row) {
        const Rational a(s.uniform_int(-9, 9), s.uniform_int(1, 4));
        if (s.uniform_int(0, 1) == 0) {
          v = Real(SurdSum(a));
        } else {
          Rational b(s.uniform_int(1, 5), s.uniform_int(1, 4));
          if (s.uniform_int(0, 1) == 0) b = -b;
          v = Real(SurdSum(a) + SurdSum::scaled_sqrt(b, BigInt(kRadicands[s.uniform_int(0, 4)])));
        }
      }
    }
    sys.bounds.assign(k, Real(SurdSum(1L)));
    Rational others(1);
    for (int i = 0; i + 1 < k; ++i) {
      Rational c(s.uniform_int(2, 24), 8);
      sys.bounds[i] = Real(SurdSum(c));
      others *= c;
    }
    Interval det = check_determinant(sys).det;
    if (!det.positive()) continue;
    // Last bound at |det| (1 + slack) / prod(others), slack in [2^-20, 1].
    Rational slack(s.uniform_int(1, 1 << 20), 1 << 20);
    sys.bounds[k - 1] = Real(SurdSum(det.hi_rational() * (1 + slack) / others));
    if (solution_box_radius(sys) <= max_radius) return sys;
  }
}

SolveResult solve_linear_forms(const LinearFormsSystem& sys, uint64_t budget,
                               const CandidateFilter& accept, const Precision& prec) {
  DetCheck det = check_determinant(sys);
  if (det.status == DetStatus::kViolated) {
    fail(ErrorCode::kDomain, "linear forms: |det| exceeds the product of the bounds");
  }
  const int k = sys.size();
  LdMatrix m = scaled_matrix(sys);
  // Rows of b are the columns of the scaled matrix.
  LdMatrix b(k, std::vector<long double>(k));
  std::vector<IntPoint> u(k, IntPoint(k, 0));
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) b[j][i] = m[i][j];
    u[j][j] = 1;
  }
  lll(b, u);
  LdMatrix mu;
  std::vector<long double> norms;
  gram_schmidt(b, mu, norms);
  Enumerator en{mu, norms, static_cast<long double>(k) * (1 + kSlack), budget, 0, {},
                IntPoint(k, 0)};
  en.run(k - 1, 0);

  std::vector<std::pair<long double, IntPoint>> cands;
  for (const auto& y : en.found) {
    IntPoint x(k, 0);
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < k; ++i) x[i] += y[j] * u[j][i];
    }
    long double key = scaled_sup(m, x);
    if (key <= 1 + kSlack) cands.emplace_back(key, std::move(x));
  }
  std::sort(cands.begin(), cands.end());
  SolveResult res;
  for (const auto& [key, x] : cands) {
    ++res.candidates;
    if (accept && !accept(x)) continue;
    if (sys.satisfied_by(x, prec)) {
      res.x = x;
      return res;
    }
  }
  const int64_t r = solution_box_radius(sys);
  if (std::pow(static_cast<long double>(2 * r + 1), k) <= static_cast<long double>(budget)) {
    for (const auto& x : box_solutions(sys, r, prec)) {
      ++res.candidates;
      if (accept && !accept(x)) continue;
      res.x = x;
      res.exhaustive = true;
      return res;
    }
  }
  fail(ErrorCode::kSolverIncomplete,
       "linear forms: no certified solution found within the search budget");
}

LinearFormsSystem build_containment_system(const SurdVector& x, int64_t N,
                                           const ApproxFunction& psi,
                                           const AffineSubspaceSpec& spec) {
  require(N >= 1, "containment: N must be positive");
  const int n = spec.n();
  const int m = spec.codim();
  const int k = spec.d() + 1;
  require(static_cast<int>(x.size()) == n, "containment: x must have n entries");
  LinearFormsSystem sys;
  sys.beta.assign(k, std::vector<Real>(k, Real(0L)));
  const Real psi_n = psi.value(BigInt(N));
  for (int v = 0; v < m; ++v) {
    sys.beta[v][v] = Real(-1L);
    for (int i = 0; i < n; ++i) sys.beta[v][m + i] = Real(spec.tilt()[i][v]);
    sys.beta[v][m + n] = Real(spec.shift()[v]);
    sys.bounds.push_back(psi_n * Real(Rational(1, 2)));
  }
  const Rational e(m, n);
  Real middle = real_pow(Real(2L), e) /
                (real_pow(Real(static_cast<long>(N)), Rational(1, n)) * real_pow(psi_n, e));
  for (int i = 0; i < n; ++i) {
    sys.beta[m + i][m + i] = Real(-1L);
    sys.beta[m + i][m + n] = Real(x[i]);
    sys.bounds.push_back(middle);
  }
  sys.beta[k - 1][k - 1] = Real(1L);
  sys.bounds.push_back(Real(static_cast<long>(N)));
  return sys;
}

CoveringWitness covering_witness(const SurdVector& x, int64_t N, const ApproxFunction& psi,
                                 const AffineSubspaceSpec& spec, uint64_t budget,
                                 const Precision& prec) {
  const int n = spec.n();
  const int m = spec.codim();
  const int k = spec.d() + 1;
  LinearFormsSystem sys = build_containment_system(x, N, psi, spec);
  CoveringWitness w;
  w.precondition = check_determinant(sys).status;
  // q = 0 is rejected; a negative q is fixed by negating the point.
  auto accept = [k](const IntPoint& p) { return p[k - 1] != 0; };
  SolveResult res = solve_linear_forms(sys, budget, accept, prec);
  IntPoint sol = res.x;
  if (sol[k - 1] < 0) {
    for (auto& v : sol) v = -v;
  }
  w.r.assign(sol.begin(), sol.begin() + m);
  w.p_hat.q = sol[k - 1];
  w.p_hat.p.assign(sol.begin() + m, sol.begin() + m + n);

  const Real half_psi = psi.value(BigInt(N)) * Real(Rational(1, 2));
  SurdSum close = nearest_int_dist_exact(hat_dot(w.p_hat, spec), prec);
  w.closeness = close.approx();
  w.closeness_ok = certified_less(Real(close), half_psi, prec);

  const Real middle = sys.bounds[m];
  w.proof_radius = middle.approx();
  w.statement_radius = w.proof_radius / static_cast<double>(N);
  const Real statement = middle / Real(static_cast<long>(N));
  w.radius_ok = true;
  w.statement_radius_ok = true;
  for (int i = 0; i < n; ++i) {
    SurdSum off = (x[i] * Rational(BigInt(w.p_hat.q)) - SurdSum(BigInt(w.p_hat.p[i]))).abs(prec);
    w.offset = std::max(w.offset, off.approx());
    w.radius_ok = w.radius_ok && certified_less(Real(off), middle, prec);
    SurdSum rel = off / Rational(BigInt(w.p_hat.q));
    w.statement_radius_ok = w.statement_radius_ok && certified_less(Real(rel), statement, prec);
  }
  w.height_ok = w.p_hat.q >= 1 && w.p_hat.height() <= N;
  for (int64_t v : w.p_hat.p) w.height_ok = w.height_ok && v >= 0;
  return w;
}

std::string witness_json(const SurdVector& x, const CoveringWitness& w) {
  nlohmann::ordered_json j;
  std::vector<std::string> xs;
  for (const auto& v : x) xs.push_back(to_exact_real(v).to_string());
  j["x"] = xs;
  j["q"] = w.p_hat.q;
  j["p"] = w.p_hat.p;
  j["r"] = w.r;
  j["precondition"] = det_status_name(w.precondition);
  j["closeness"] = w.closeness;
  j["offset"] = w.offset;
  j["proof_radius"] = w.proof_radius;
  j["statement_radius"] = w.statement_radius;
  j["closeness_ok"] = w.closeness_ok;
  j["radius_ok"] = w.radius_ok;
  j["height_ok"] = w.height_ok;
  j["statement_radius_ok"] = w.statement_radius_ok;
  return j.dump();
}

}  // namespace diophlab
