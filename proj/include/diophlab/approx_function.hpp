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

// Positive non-increasing approximation functions psi on q >= 1.
//
//   power_log:  psi(q) = C q^-tau log(q+1)^-sigma,  C > 0, tau, sigma >= 0
//   table:      psi(q) = v[min(q, size) - 1], right-constant extension

#ifndef DIOPHLAB_APPROX_FUNCTION_HPP_
#define DIOPHLAB_APPROX_FUNCTION_HPP_

#include <string>
#include <vector>

#include "diophlab/real.hpp"

namespace diophlab {

class ApproxFunction {
 public:
  enum class Kind { kPowerLog, kTable };

  static ApproxFunction power_log(const Rational& c, const Rational& tau,
                                  const Rational& sigma = Rational(0));
  static ApproxFunction power(const Rational& tau) {
    return power_log(Rational(1), tau);
  }
  static ApproxFunction table(std::vector<Rational> values);

  Kind kind() const { return kind_; }
  bool is_power_log() const { return kind_ == Kind::kPowerLog; }
  const Rational& c() const { return c_; }
  const Rational& tau() const { return tau_; }
  const Rational& sigma() const { return sigma_; }
  const std::vector<Rational>& values() const { return values_; }

  // Exact whenever possible (rational table entries, or sigma = 0 with 2 tau
  // an integer).
  Real value(const BigInt& q) const;
  Real value(long q) const { return value(BigInt(q)); }
  bool exact_at_integers() const;
  // Interval enclosure of psi(q) without exact radicals.
  Interval enclosure(const BigInt& q, long prec) const;
  // Double approximation for bound formulas, valid for real q >= 1.
  double approx(double q) const;
  long double approx_ld(long double q) const;

  std::string to_string() const;

 private:
  Kind kind_ = Kind::kPowerLog;
  Rational c_{1};
  Rational tau_{0};
  Rational sigma_{0};
  std::vector<Rational> values_;
};

}  // namespace diophlab

#endif  // DIOPHLAB_APPROX_FUNCTION_HPP_
