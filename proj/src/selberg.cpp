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

#include "diophlab/selberg.hpp"

#include <algorithm>
#include <sstream>

#include "diophlab/error.hpp"
#include "diophlab/rng.hpp"

namespace diophlab {

namespace {

Interval beurling_taper(const Rational& t, long prec) {
  Interval pi = Interval::pi(prec);
  Interval pt = pi * Interval(t, prec);
  Interval one(1L, prec);
  Interval tt(t, prec);
  return pt * (one - tt) * cos(pt) / sin(pt) + tt;
}

}  // namespace

TrigPolynomial TrigPolynomial::construct(const Rational& delta, int degree, SelbergSign sign,
                                         long prec) {
  require(delta > 0 && delta < Rational(1, 2), "selberg: delta must lie in (0, 1/2)");
  require(degree >= 1, "selberg: degree J must be at least 1");
  TrigPolynomial p;
  p.degree_ = degree;
  p.delta_ = delta;
  p.sign_ = sign;
  p.prec_ = prec;
  const long work = prec + 32;
  const Rational inv(1, degree + 1);
  const int s = sign == SelbergSign::kMajorant ? 1 : -1;
  p.b0_ = 2 * delta + s * inv;
  p.coeffs_.emplace_back(p.b0_, prec);
  Interval pi = Interval::pi(work);
  for (int j = 1; j <= degree; ++j) {
    Rational t(j, degree + 1);
    Interval arg = pi * Interval(Rational(2 * j) * delta, work);
    Interval main = beurling_taper(t, work) * sin(arg) / (pi * j);
    Interval edge = Interval(Rational(1) - t, work) * cos(arg) * Interval(inv, work);
    Interval b = s > 0 ? main + edge : main - edge;
    p.coeffs_.push_back(with_precision(b, prec));
  }
  return p;
}

Interval TrigPolynomial::coefficient_bound(int j) const {
  const long work = prec_ + 32;
  Interval inv(Rational(1, degree_ + 1), work);
  if (j == 0) return inv + Interval(2 * delta_, work);
  const int aj = j < 0 ? -j : j;
  Interval tail = Interval(1L, work) / (Interval::pi(work) * aj);
  return inv + min(Interval(2 * delta_, work), tail);
}

bool TrigPolynomial::coefficient_contract_holds() const {
  for (int j = 1; j <= degree_; ++j) {
    if (!certainly_leq(abs(coeffs_[j]), coefficient_bound(j))) return false;
  }
  return b0_ == 2 * delta_ + (sign_ == SelbergSign::kMajorant ? 1 : -1) * Rational(1, degree_ + 1);
}

Interval TrigPolynomial::evaluate_at(const Rational& y, long prec) const {
  // b_0 + 2 sum_j b_j cos(2 pi j y) via the Chebyshev recurrence.
  Interval theta = Interval::pi(prec) * Interval(2 * y, prec);
  Interval c1 = cos(theta);
  Interval two_c1 = c1 * 2L;
  Interval prev(1L, prec);
  Interval cur = c1;
  Interval acc(0L, prec);
  for (int j = 1; j <= degree_; ++j) {
    acc += with_precision(coeffs_[j], prec) * cur;
    Interval next = two_c1 * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return Interval(b0_, prec) + acc * 2L;
}

Interval TrigPolynomial::evaluate(const Rational& y, long bits) const {
  long prec = std::max<long>(bits + 32, prec_);
  Interval v = evaluate_at(y, prec);
  // Coefficient enclosures limit the attainable width.
  if (!v.width_at_most(bits) && prec_ < bits + 32) {
    TrigPolynomial refined = construct(delta_, degree_, sign_, bits + 64);
    return refined.evaluate(y, bits);
  }
  return v;
}

std::string TrigPolynomial::coefficient_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "j,re_b,im_b,bound\n";
  for (int j = -degree_; j <= degree_; ++j) {
    os << j << "," << coefficient(j).mid() << ",0," << coefficient_bound(j).hi_up() << "\n";
  }
  return os.str();
}

std::optional<int> arc_indicator(const Rational& y, const Rational& delta) {
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  Rational r = y - Rational(f);
  Rational dist = r <= Rational(1, 2) ? r : Rational(1 - r);
  if (dist < delta) return 1;
  if (dist == delta) return std::nullopt;
  return 0;
}

MajorizationReport check_majorization(const TrigPolynomial& minorant,
                                      const TrigPolynomial& majorant, long points,
                                      uint64_t seed, long max_bits) {
  require(minorant.delta() == majorant.delta(), "majorization check needs a common delta");
  MajorizationReport rep;
  rep.points = points;
  for (long i = 0; i < points; ++i) {
    Stream s(seed, static_cast<uint64_t>(i));
    // Cell [i/N, (i+1)/N) with a 64-bit jitter.
    Rational u(BigInt(static_cast<unsigned long>(s.next())), BigInt(1) << 64);
    u.canonicalize();
    Rational y = (Rational(i) + u) / Rational(points);
    auto chi = arc_indicator(y, majorant.delta());
    if (!chi) continue;
    ++rep.tested;
    Interval target(static_cast<long>(*chi), 64);
    for (const TrigPolynomial* poly : {&minorant, &majorant}) {
      const bool upper = poly->sign() == SelbergSign::kMajorant;
      bool settled = false;
      for (long bits = 96; bits <= max_bits; bits *= 2) {
        Interval v = poly->evaluate(y, bits);
        bool ok = upper ? certainly_leq(target, v) : certainly_leq(v, target);
        bool bad = upper ? certainly_less(v, target) : certainly_less(target, v);
        if (ok || bad) {
          if (bad) ++rep.failures;
          settled = true;
          break;
        }
      }
      if (!settled) ++rep.undecided;
    }
  }
  return rep;
}

}  // namespace diophlab
