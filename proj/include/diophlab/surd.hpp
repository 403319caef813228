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

// Exact elements of multiquadratic fields Q(sqrt(D1), sqrt(D2), ...).
//
// A SurdSum is r + sum_k c_k sqrt(D_k) with rational r, c_k and distinct
// squarefree D_k > 1. The representation is canonical: terms are sorted by
// D and no coefficient is zero, so equality and zero tests are structural.

#ifndef DIOPHLAB_SURD_HPP_
#define DIOPHLAB_SURD_HPP_

#include <string>
#include <utility>
#include <vector>

#include "diophlab/interval.hpp"

namespace diophlab {

struct Precision {
  long bits = 128;
  long max_bits = 4096;
};

// n = s^2 * D with D squarefree. Requires n > 0.
struct SquarefreeSplit {
  BigInt square_root;  // s
  BigInt kernel;       // D
};
SquarefreeSplit squarefree_split(const BigInt& n);

class SurdSum {
 public:
  using Term = std::pair<BigInt, Rational>;  // (D, coefficient)

  SurdSum() = default;
  SurdSum(long value) : rational_(value) {}  // NOLINT: implicit by design
  SurdSum(const BigInt& value) : rational_(value) {}  // NOLINT
  SurdSum(const Rational& value) : rational_(value) {}  // NOLINT

  // c * sqrt(n) for any n >= 0.
  static SurdSum scaled_sqrt(const Rational& c, const BigInt& n);
  static SurdSum sqrt(const BigInt& n) { return scaled_sqrt(Rational(1), n); }

  const Rational& rational_part() const { return rational_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty() && rational_ == 0; }
  bool is_rational() const { return terms_.empty(); }
  bool is_integer() const {
    return terms_.empty() && rational_.get_den() == 1;
  }

  SurdSum operator-() const;
  SurdSum& operator+=(const SurdSum& rhs);
  SurdSum& operator-=(const SurdSum& rhs);
  SurdSum& operator*=(const SurdSum& rhs);
  SurdSum& operator*=(const Rational& rhs);

  // Defined for rational values and a + b sqrt(D).
  SurdSum inverse() const;

  // Enclosure at the given MPFR precision.
  Interval evaluate(long prec) const;
  // Enclosure of width at most 2^-bits.
  Interval evaluate_to_width(long bits, const Precision& budget) const;
  double approx() const;

  // Exact sign; escalates evaluation precision up to the budget.
  int sign(const Precision& budget = Precision{}) const;
  BigInt floor(const Precision& budget = Precision{}) const;
  BigInt ceil(const Precision& budget = Precision{}) const;
  // Exact distance to the nearest integer, in [0, 1/2].
  SurdSum nearest_int_distance(const Precision& budget = Precision{}) const;
  SurdSum abs(const Precision& budget = Precision{}) const;

  std::string to_string() const;

  friend bool operator==(const SurdSum& a, const SurdSum& b) {
    return a.rational_ == b.rational_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const SurdSum& a, const SurdSum& b) {
    return !(a == b);
  }

 private:
  void add_term(const BigInt& d, const Rational& c);
  Rational rational_;
  std::vector<Term> terms_;
};

SurdSum operator+(SurdSum a, const SurdSum& b);
SurdSum operator-(SurdSum a, const SurdSum& b);
SurdSum operator*(SurdSum a, const SurdSum& b);
SurdSum operator*(SurdSum a, const Rational& b);
SurdSum operator*(const Rational& a, SurdSum b);
SurdSum operator/(SurdSum a, const Rational& b);

// a < b, a <= b, exactly.
bool exact_less(const SurdSum& a, const SurdSum& b,
                const Precision& budget = Precision{});
bool exact_leq(const SurdSum& a, const SurdSum& b,
               const Precision& budget = Precision{});

}  // namespace diophlab

#endif  // DIOPHLAB_SURD_HPP_
