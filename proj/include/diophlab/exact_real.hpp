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

// A rational p/r or a quadratic irrational (p + q*sqrt(D))/r.
//
// Text form accepted by parse():
//   7   -3/4   sqrt(2)   3*sqrt(2)   (1+sqrt(5))/2   (p+q*sqrt(D))/r
// and any of these with a leading sign, e.g. -sqrt(2).
// to_string() always emits the canonical form, "p", "p/r" or
// "(p+q*sqrt(D))/r" with D squarefree, r > 0 and gcd(p, q, r) = 1.

#ifndef DIOPHLAB_EXACT_REAL_HPP_
#define DIOPHLAB_EXACT_REAL_HPP_

#include <string>

#include "diophlab/surd.hpp"

namespace diophlab {

class ExactReal {
 public:
  ExactReal() : p_(0), q_(0), d_(1), r_(1) {}
  ExactReal(long value) : p_(value), q_(0), d_(1), r_(1) {}  // NOLINT
  ExactReal(const Rational& value);                            // NOLINT
  // (p + q sqrt(D)) / r; D > 0, r != 0.
  ExactReal(const BigInt& p, const BigInt& q, const BigInt& d, const BigInt& r);

  static ExactReal parse(const std::string& text);
  // Golden ratio (1 + sqrt(5)) / 2.
  static ExactReal golden_ratio() { return ExactReal(1, 1, 5, 2); }

  bool is_rational() const { return q_ == 0; }
  Rational as_rational() const;  // requires is_rational()
  const BigInt& p() const { return p_; }
  const BigInt& q() const { return q_; }
  const BigInt& radicand() const { return d_; }
  const BigInt& denominator() const { return r_; }

  long precision_bits() const { return precision_bits_; }
  void set_precision_bits(long bits) { precision_bits_ = bits; }

  SurdSum to_surd() const;
  // Enclosure of width at most 2^-bits.
  Interval evaluate(long bits) const;
  Interval evaluate() const { return evaluate(precision_bits_); }
  double approx() const;

  std::string to_string() const;

  friend bool operator==(const ExactReal& a, const ExactReal& b) {
    return a.p_ == b.p_ && a.q_ == b.q_ && a.d_ == b.d_ && a.r_ == b.r_;
  }
  friend bool operator!=(const ExactReal& a, const ExactReal& b) {
    return !(a == b);
  }

 private:
  void normalize();
  BigInt p_, q_, d_, r_;
  long precision_bits_ = 128;
};

// Converts a SurdSum with at most one radical back to ExactReal.
ExactReal to_exact_real(const SurdSum& value);

}  // namespace diophlab

#endif  // DIOPHLAB_EXACT_REAL_HPP_
