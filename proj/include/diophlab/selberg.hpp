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

// Selberg majorant and minorant of the indicator of (-delta, delta) on the
// circle, built from Beurling's extremal function:
//
//   b_0 = 2 delta +- 1/(J+1)
//   b_j = Jh(t) sin(2 pi j delta)/(pi j) +- (1 - t) cos(2 pi j delta)/(J+1)
//
// with t = |j|/(J+1) and Jh(t) = pi t (1-t) cot(pi t) + t. Coefficients are
// real and even in j.

#ifndef DIOPHLAB_SELBERG_HPP_
#define DIOPHLAB_SELBERG_HPP_

#include <optional>
#include <string>
#include <vector>

#include "diophlab/interval.hpp"
#include "diophlab/surd.hpp"

namespace diophlab {

enum class SelbergSign { kMajorant, kMinorant };

class TrigPolynomial {
 public:
  static TrigPolynomial construct(const Rational& delta, int degree, SelbergSign sign,
                                  long prec = 128);

  int degree() const { return degree_; }
  const Rational& delta() const { return delta_; }
  SelbergSign sign() const { return sign_; }
  long precision() const { return prec_; }

  // Exact constant term.
  const Rational& b0() const { return b0_; }
  // Enclosure of b_j for |j| <= degree. The imaginary part is identically 0.
  const Interval& coefficient(int j) const { return coeffs_[j < 0 ? -j : j]; }
  // 1/(J+1) + min(2 delta, 1/(pi |j|)).
  Interval coefficient_bound(int j) const;
  // Certified |b_j| <= bound for every j.
  bool coefficient_contract_holds() const;

  // Enclosure of S(y) of width at most 2^-bits.
  Interval evaluate(const Rational& y, long bits = 64) const;

  // Columns j, re(b_j), im(b_j), bound_j.
  std::string coefficient_csv() const;

 private:
  Interval evaluate_at(const Rational& y, long prec) const;

  int degree_ = 1;
  Rational delta_;
  SelbergSign sign_ = SelbergSign::kMajorant;
  long prec_ = 128;
  Rational b0_;
  std::vector<Interval> coeffs_;
};

// Indicator of the open arc (-delta, delta) mod 1 at rational y; empty at
// the two endpoints.
std::optional<int> arc_indicator(const Rational& y, const Rational& delta);

struct MajorizationReport {
  long points = 0;
  long tested = 0;    // points away from the endpoints
  long failures = 0;  // certified violations
  long undecided = 0; // comparisons not settled within the budget
};

// Checks S^- <= chi <= S^+ on `points` jittered grid points.
MajorizationReport check_majorization(const TrigPolynomial& minorant,
                                      const TrigPolynomial& majorant, long points,
                                      uint64_t seed, long max_bits = 1024);

}  // namespace diophlab

#endif  // DIOPHLAB_SELBERG_HPP_
