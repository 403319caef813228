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

#include "diophlab/real.hpp"

#include <algorithm>

#include "diophlab/error.hpp"

namespace diophlab {

namespace {

Rational rational_pow(const Rational& base, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

bool invertible_exactly(const SurdSum& v) {
  return !v.is_zero() && v.terms().size() <= 1;
}

}  // namespace

Real Real::lazy(Evaluator eval) {
  Real r;
  r.exact_.reset();
  r.eval_ = std::make_shared<const Evaluator>(std::move(eval));
  return r;
}

Interval Real::eval(long prec) const {
  if (exact_) return exact_->evaluate(prec);
  return (*eval_)(prec);
}

double Real::approx() const { return eval(64).mid(); }

int certified_compare(const Real& a, const Real& b, const Precision& budget) {
  if (a.is_exact() && b.is_exact()) {
    return -(b.exact() - a.exact()).sign(budget);
  }
  long prec = std::max<long>(budget.bits, 64);
  while (true) {
    Interval ia = a.eval(prec);
    Interval ib = b.eval(prec);
    if (certainly_less(ia, ib)) return -1;
    if (certainly_less(ib, ia)) return 1;
    if (prec >= budget.max_bits) break;
    prec = std::min(prec * 2, budget.max_bits);
  }
  fail(ErrorCode::kPrecisionExhausted,
       "comparison undecided at " + std::to_string(budget.max_bits) + " bits");
}

Real operator+(const Real& a, const Real& b) {
  if (a.is_exact() && b.is_exact()) return Real(a.exact() + b.exact());
  return Real::lazy([a, b](long prec) { return a.eval(prec + 4) + b.eval(prec + 4); });
}

Real operator-(const Real& a, const Real& b) {
  if (a.is_exact() && b.is_exact()) return Real(a.exact() - b.exact());
  return Real::lazy([a, b](long prec) { return a.eval(prec + 4) - b.eval(prec + 4); });
}

Real operator*(const Real& a, const Real& b) {
  if (a.is_exact() && b.is_exact()) return Real(a.exact() * b.exact());
  return Real::lazy([a, b](long prec) { return a.eval(prec + 4) * b.eval(prec + 4); });
}

Real operator/(const Real& a, const Real& b) {
  if (a.is_exact() && b.is_exact() && invertible_exactly(b.exact())) {
    return Real(a.exact() * b.exact().inverse());
  }
  if (b.is_exact() && b.exact().is_zero()) fail(ErrorCode::kDomain, "division by zero");
  return Real::lazy([a, b](long prec) { return a.eval(prec + 4) / b.eval(prec + 4); });
}

Real real_sqrt(const Real& a) { return real_pow(a, Rational(1, 2)); }

Real real_pow(const Real& a, const Rational& e) {
  if (a.is_exact() && a.exact().is_rational()) {
    const Rational& base = a.exact().rational_part();
    require(base > 0, "power of a non-positive value");
    Rational twice = e * 2;
    if (twice.get_den() == 1 && mpz_fits_slong_p(twice.get_num_mpz_t()) != 0) {
      long k = twice.get_num().get_si();
      bool invert = k < 0;
      unsigned long m = static_cast<unsigned long>(invert ? -k : k);
      Rational whole = rational_pow(base, m / 2);
      SurdSum out(whole);
      if (m % 2 == 1) {
        // sqrt(num/den) = sqrt(num*den)/den.
        BigInt nd = base.get_num() * base.get_den();
        out *= SurdSum::scaled_sqrt(Rational(BigInt(1), base.get_den()), nd);
      }
      if (invert) out = out.inverse();
      return Real(out);
    }
    // Exact when numerator and denominator are perfect b-th powers.
    if (mpz_fits_ulong_p(e.get_den_mpz_t()) != 0 && mpz_fits_slong_p(e.get_num_mpz_t()) != 0) {
      const unsigned long b = mpz_get_ui(e.get_den_mpz_t());
      BigInt rn, rd;
      if (mpz_root(rn.get_mpz_t(), base.get_num_mpz_t(), b) != 0 &&
          mpz_root(rd.get_mpz_t(), base.get_den_mpz_t(), b) != 0) {
        const long k = mpz_get_si(e.get_num_mpz_t());
        Rational root(rn, rd);
        Rational out = rational_pow(root, static_cast<unsigned long>(k < 0 ? -k : k));
        if (k < 0) out = Rational(1) / out;
        return Real(out);
      }
    }
  }
  return Real::lazy([a, e](long prec) {
    const long work = prec + 16;
    Interval base = a.eval(work);
    return pow(base, Interval(e, work));
  });
}

}  // namespace diophlab
