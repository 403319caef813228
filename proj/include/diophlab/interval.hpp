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

// Closed real intervals with MPFR endpoints. Every operation rounds the
// lower endpoint toward -inf and the upper endpoint toward +inf, so the
// result always encloses the exact image of the operand intervals.

#ifndef DIOPHLAB_INTERVAL_HPP_
#define DIOPHLAB_INTERVAL_HPP_

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace diophlab {

using BigInt = mpz_class;
using Rational = mpq_class;

class Interval {
 public:
  explicit Interval(long prec = 128);
  Interval(long value, long prec);
  Interval(const BigInt& value, long prec);
  Interval(const Rational& value, long prec);
  static Interval from_double(double value, long prec = 128);
  static Interval hull(const Rational& lo, const Rational& hi, long prec);
  static Interval pi(long prec);

  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  long precision() const { return prec_; }
  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }
  mpfr_ptr lo() { return lo_; }
  mpfr_ptr hi() { return hi_; }

  double lo_down() const;
  double hi_up() const;
  double mid() const;
  // Upper bound on hi - lo, as a double rounded up.
  double width() const;
  bool width_at_most(long bits) const;  // hi - lo <= 2^-bits

  bool positive() const;      // lo > 0
  bool negative() const;      // hi < 0
  bool contains_zero() const;
  bool contains(const Rational& value) const;
  bool is_point() const;

  // Lower and upper endpoints as exact rationals.
  Rational lo_rational() const;
  Rational hi_rational() const;

  Interval operator-() const;
  Interval& operator+=(const Interval& rhs);
  Interval& operator-=(const Interval& rhs);
  Interval& operator*=(const Interval& rhs);

  std::string to_string(int digits = 20) const;

 private:
  long prec_;
  mpfr_t lo_;
  mpfr_t hi_;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);  // b must exclude 0
Interval operator*(const Interval& a, long b);
Interval operator/(const Interval& a, long b);

Interval abs(const Interval& x);
Interval sqrt(const Interval& x);
Interval square(const Interval& x);
Interval log(const Interval& x);  // x > 0
Interval exp(const Interval& x);
// x^e for x > 0 with a real exponent interval.
Interval pow(const Interval& x, const Interval& e);
Interval pow_int(const Interval& x, unsigned long e);
Interval sin(const Interval& x);
Interval cos(const Interval& x);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);
// Changes working precision; widening outward if precision shrinks.
Interval with_precision(const Interval& x, long prec);

inline bool certainly_less(const Interval& a, const Interval& b) {
  return mpfr_less_p(a.hi(), b.lo()) != 0;
}
inline bool certainly_leq(const Interval& a, const Interval& b) {
  return mpfr_lessequal_p(a.hi(), b.lo()) != 0;
}

}  // namespace diophlab

#endif  // DIOPHLAB_INTERVAL_HPP_
