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

#include "diophlab/interval.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "diophlab/error.hpp"

namespace diophlab {

namespace {

long max_prec(const Interval& a, const Interval& b) {
  return std::max(a.precision(), b.precision());
}

// Scratch value with RAII cleanup.
class Scratch {
 public:
  explicit Scratch(long prec) { mpfr_init2(v_, prec); }
  ~Scratch() { mpfr_clear(v_); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

}  // namespace

Interval::Interval(long prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(long value, long prec) : Interval(prec) {
  mpfr_set_si(lo_, value, MPFR_RNDD);
  mpfr_set_si(hi_, value, MPFR_RNDU);
}

Interval::Interval(const BigInt& value, long prec) : Interval(prec) {
  mpfr_set_z(lo_, value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_, value.get_mpz_t(), MPFR_RNDU);
}

Interval::Interval(const Rational& value, long prec) : Interval(prec) {
  mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
}

Interval Interval::from_double(double value, long prec) {
  Interval r(std::max<long>(prec, 53));
  mpfr_set_d(r.lo_, value, MPFR_RNDD);
  mpfr_set_d(r.hi_, value, MPFR_RNDU);
  return r;
}

Interval Interval::hull(const Rational& lo, const Rational& hi, long prec) {
  Interval r(prec);
  mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::pi(long prec) {
  Interval r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

Interval::Interval(const Interval& other) : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this == &other) return *this;
  if (prec_ != other.prec_) {
    prec_ = other.prec_;
    mpfr_set_prec(lo_, prec_);
    mpfr_set_prec(hi_, prec_);
  }
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  std::swap(prec_, other.prec_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

double Interval::lo_down() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_up() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid() const {
  Scratch m(prec_ + 1);
  mpfr_add(m.get(), lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return mpfr_get_d(m.get(), MPFR_RNDN);
}

double Interval::width() const {
  Scratch w(prec_);
  mpfr_sub(w.get(), hi_, lo_, MPFR_RNDU);
  return mpfr_get_d(w.get(), MPFR_RNDU);
}

bool Interval::width_at_most(long bits) const {
  Scratch w(prec_);
  mpfr_sub(w.get(), hi_, lo_, MPFR_RNDU);
  return mpfr_cmp_ui_2exp(w.get(), 1, -bits) <= 0;
}

bool Interval::positive() const { return mpfr_sgn(lo_) > 0; }
bool Interval::negative() const { return mpfr_sgn(hi_) < 0; }
bool Interval::contains_zero() const {
  return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}
bool Interval::contains(const Rational& value) const {
  return mpfr_cmp_q(lo_, value.get_mpq_t()) <= 0 &&
         mpfr_cmp_q(hi_, value.get_mpq_t()) >= 0;
}
bool Interval::is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }

namespace {
Rational mpfr_to_rational(mpfr_srcptr x) {
  BigInt mant;
  mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), x);
  Rational r(mant);
  if (e >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
  }
  r.canonicalize();
  return r;
}
}  // namespace

Rational Interval::lo_rational() const { return mpfr_to_rational(lo_); }
Rational Interval::hi_rational() const { return mpfr_to_rational(hi_); }

Interval Interval::operator-() const {
  Interval r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval& Interval::operator+=(const Interval& rhs) {
  *this = *this + rhs;
  return *this;
}
Interval& Interval::operator-=(const Interval& rhs) {
  *this = *this - rhs;
  return *this;
}
Interval& Interval::operator*=(const Interval& rhs) {
  *this = *this * rhs;
  return *this;
}

std::string Interval::to_string(int digits) const {
  char buf[256];
  mpfr_snprintf(buf, sizeof(buf), "[%.*Rg, %.*Rg]", digits, lo_, digits, hi_);
  return buf;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(max_prec(a, b));
  mpfr_add(r.lo(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_add(r.hi(), a.hi(), b.hi(), MPFR_RNDU);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(max_prec(a, b));
  mpfr_sub(r.lo(), a.lo(), b.hi(), MPFR_RNDD);
  mpfr_sub(r.hi(), a.hi(), b.lo(), MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  const long prec = max_prec(a, b);
  Interval r(prec);
  // Sign-split fast paths cover the common all-positive case.
  if (mpfr_sgn(a.lo()) >= 0 && mpfr_sgn(b.lo()) >= 0) {
    mpfr_mul(r.lo(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_mul(r.hi(), a.hi(), b.hi(), MPFR_RNDU);
    return r;
  }
  mpfr_srcptr xs[2] = {a.lo(), a.hi()};
  mpfr_srcptr ys[2] = {b.lo(), b.hi()};
  Scratch t(prec);
  bool first = true;
  for (mpfr_srcptr x : xs) {
    for (mpfr_srcptr y : ys) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), r.lo())) mpfr_set(r.lo(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), r.hi())) mpfr_set(r.hi(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) {
    fail(ErrorCode::kPrecisionExhausted, "interval division by an interval containing zero");
  }
  const long prec = max_prec(a, b);
  Interval r(prec);
  mpfr_srcptr xs[2] = {a.lo(), a.hi()};
  mpfr_srcptr ys[2] = {b.lo(), b.hi()};
  Scratch t(prec);
  bool first = true;
  for (mpfr_srcptr x : xs) {
    for (mpfr_srcptr y : ys) {
      mpfr_div(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), r.lo())) mpfr_set(r.lo(), t.get(), MPFR_RNDD);
      mpfr_div(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), r.hi())) mpfr_set(r.hi(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return r;
}

Interval operator*(const Interval& a, long b) {
  Interval r(a.precision());
  if (b >= 0) {
    mpfr_mul_si(r.lo(), a.lo(), b, MPFR_RNDD);
    mpfr_mul_si(r.hi(), a.hi(), b, MPFR_RNDU);
  } else {
    mpfr_mul_si(r.lo(), a.hi(), b, MPFR_RNDD);
    mpfr_mul_si(r.hi(), a.lo(), b, MPFR_RNDU);
  }
  return r;
}

Interval operator/(const Interval& a, long b) {
  if (b == 0) fail(ErrorCode::kDomain, "interval division by zero");
  Interval r(a.precision());
  if (b > 0) {
    mpfr_div_si(r.lo(), a.lo(), b, MPFR_RNDD);
    mpfr_div_si(r.hi(), a.hi(), b, MPFR_RNDU);
  } else {
    mpfr_div_si(r.lo(), a.hi(), b, MPFR_RNDD);
    mpfr_div_si(r.hi(), a.lo(), b, MPFR_RNDU);
  }
  return r;
}

Interval abs(const Interval& x) {
  if (mpfr_sgn(x.lo()) >= 0) return x;
  if (mpfr_sgn(x.hi()) <= 0) return -x;
  Interval r(x.precision());
  mpfr_set_zero(r.lo(), 1);
  if (mpfr_cmpabs(x.lo(), x.hi()) > 0) {
    mpfr_neg(r.hi(), x.lo(), MPFR_RNDU);
  } else {
    mpfr_set(r.hi(), x.hi(), MPFR_RNDU);
  }
  return r;
}

Interval sqrt(const Interval& x) {
  if (mpfr_sgn(x.lo()) < 0) fail(ErrorCode::kDomain, "sqrt of negative interval");
  Interval r(x.precision());
  mpfr_sqrt(r.lo(), x.lo(), MPFR_RNDD);
  mpfr_sqrt(r.hi(), x.hi(), MPFR_RNDU);
  return r;
}

Interval square(const Interval& x) {
  Interval a = abs(x);
  Interval r(x.precision());
  mpfr_sqr(r.lo(), a.lo(), MPFR_RNDD);
  mpfr_sqr(r.hi(), a.hi(), MPFR_RNDU);
  return r;
}

Interval log(const Interval& x) {
  if (!x.positive()) fail(ErrorCode::kDomain, "log of non-positive interval");
  Interval r(x.precision());
  mpfr_log(r.lo(), x.lo(), MPFR_RNDD);
  mpfr_log(r.hi(), x.hi(), MPFR_RNDU);
  return r;
}

Interval exp(const Interval& x) {
  Interval r(x.precision());
  mpfr_exp(r.lo(), x.lo(), MPFR_RNDD);
  mpfr_exp(r.hi(), x.hi(), MPFR_RNDU);
  return r;
}

Interval pow(const Interval& x, const Interval& e) {
  return exp(e * log(x));
}

Interval pow_int(const Interval& x, unsigned long e) {
  Interval result(1L, x.precision());
  Interval base = x;
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

namespace {

// f is 1-Lipschitz with range [-1, 1]; evaluate at the midpoint and widen by
// the radius.
template <class F>
Interval lipschitz_eval(const Interval& x, F f) {
  const long prec = x.precision();
  Scratch m(prec + 2);
  Scratch rad(prec + 2);
  mpfr_add(m.get(), x.lo(), x.hi(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  Scratch d1(prec + 2);
  Scratch d2(prec + 2);
  mpfr_sub(d1.get(), m.get(), x.lo(), MPFR_RNDU);
  mpfr_sub(d2.get(), x.hi(), m.get(), MPFR_RNDU);
  mpfr_max(rad.get(), d1.get(), d2.get(), MPFR_RNDU);
  Interval r(prec);
  f(r.lo(), m.get(), MPFR_RNDD);
  f(r.hi(), m.get(), MPFR_RNDU);
  mpfr_sub(r.lo(), r.lo(), rad.get(), MPFR_RNDD);
  mpfr_add(r.hi(), r.hi(), rad.get(), MPFR_RNDU);
  if (mpfr_cmp_si(r.lo(), -1) < 0) mpfr_set_si(r.lo(), -1, MPFR_RNDD);
  if (mpfr_cmp_si(r.hi(), 1) > 0) mpfr_set_si(r.hi(), 1, MPFR_RNDU);
  return r;
}

}  // namespace

Interval sin(const Interval& x) {
  return lipschitz_eval(x, [](mpfr_ptr out, mpfr_srcptr in, mpfr_rnd_t rnd) {
    mpfr_sin(out, in, rnd);
  });
}

Interval cos(const Interval& x) {
  return lipschitz_eval(x, [](mpfr_ptr out, mpfr_srcptr in, mpfr_rnd_t rnd) {
    mpfr_cos(out, in, rnd);
  });
}

Interval min(const Interval& a, const Interval& b) {
  Interval r(max_prec(a, b));
  mpfr_min(r.lo(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_min(r.hi(), a.hi(), b.hi(), MPFR_RNDU);
  return r;
}

Interval max(const Interval& a, const Interval& b) {
  Interval r(max_prec(a, b));
  mpfr_max(r.lo(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_max(r.hi(), a.hi(), b.hi(), MPFR_RNDU);
  return r;
}

Interval hull(const Interval& a, const Interval& b) {
  Interval r(max_prec(a, b));
  mpfr_min(r.lo(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_max(r.hi(), a.hi(), b.hi(), MPFR_RNDU);
  return r;
}

Interval with_precision(const Interval& x, long prec) {
  Interval r(prec);
  mpfr_set(r.lo(), x.lo(), MPFR_RNDD);
  mpfr_set(r.hi(), x.hi(), MPFR_RNDU);
  return r;
}

}  // namespace diophlab
