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

// Real numbers that are either exact multiquadratic values or lazily
// evaluated enclosures. Comparisons use exact arithmetic when both sides are
// exact and otherwise refine the enclosures until they separate.

#ifndef DIOPHLAB_REAL_HPP_
#define DIOPHLAB_REAL_HPP_

#include <functional>
#include <memory>
#include <optional>

#include "diophlab/surd.hpp"

namespace diophlab {

class Real {
 public:
  using Evaluator = std::function<Interval(long prec)>;

  Real() : exact_(SurdSum()) {}
  Real(SurdSum exact) : exact_(std::move(exact)) {}  // NOLINT
  Real(const Rational& value) : exact_(SurdSum(value)) {}  // NOLINT
  Real(long value) : exact_(SurdSum(value)) {}  // NOLINT
  static Real lazy(Evaluator eval);

  bool is_exact() const { return exact_.has_value(); }
  const SurdSum& exact() const { return *exact_; }
  Interval eval(long prec) const;
  double approx() const;

 private:
  std::optional<SurdSum> exact_;
  std::shared_ptr<const Evaluator> eval_;
};

// Certified three-way comparison: -1, 0 (only when both sides are exact and
// equal) or 1. Throws kPrecisionExhausted if the enclosures never separate.
int certified_compare(const Real& a, const Real& b,
                      const Precision& budget = Precision{});
inline bool certified_less(const Real& a, const Real& b,
                           const Precision& budget = Precision{}) {
  return certified_compare(a, b, budget) < 0;
}
inline bool certified_leq(const Real& a, const Real& b,
                          const Precision& budget = Precision{}) {
  return certified_compare(a, b, budget) <= 0;
}

// Lazy arithmetic. Exact operands stay exact where SurdSum permits.
Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real real_sqrt(const Real& a);
// a^e for a > 0 and rational e; exact when a is rational-exact and either 2e
// is an integer or a is a perfect den(e)-th power.
Real real_pow(const Real& a, const Rational& e);

}  // namespace diophlab

#endif  // DIOPHLAB_REAL_HPP_
