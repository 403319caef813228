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

#include "diophlab/approx_function.hpp"

#include <cmath>
#include <sstream>

#include "diophlab/error.hpp"

namespace diophlab {

ApproxFunction ApproxFunction::power_log(const Rational& c, const Rational& tau,
                                         const Rational& sigma) {
  require(c > 0, "psi constant C must be positive");
  require(tau >= 0, "psi exponent tau must be non-negative");
  require(sigma >= 0, "psi log exponent sigma must be non-negative");
  ApproxFunction f;
  f.kind_ = Kind::kPowerLog;
  f.c_ = c;
  f.tau_ = tau;
  f.sigma_ = sigma;
  return f;
}

ApproxFunction ApproxFunction::table(std::vector<Rational> values) {
  require(!values.empty(), "psi table must not be empty");
  for (size_t i = 0; i < values.size(); ++i) {
    require(values[i] > 0, "psi table values must be positive");
    if (i > 0) require(values[i] <= values[i - 1], "psi table must be non-increasing");
  }
  ApproxFunction f;
  f.kind_ = Kind::kTable;
  f.values_ = std::move(values);
  return f;
}

bool ApproxFunction::exact_at_integers() const {
  if (kind_ == Kind::kTable) return true;
  return sigma_ == 0 && Rational(tau_ * 2).get_den() == 1;
}

Real ApproxFunction::value(const BigInt& q) const {
  require(q >= 1, "psi is defined on q >= 1");
  if (kind_ == Kind::kTable) {
    if (q >= static_cast<unsigned long>(values_.size())) return Real(values_.back());
    return Real(values_[q.get_ui() - 1]);
  }
  Real base = Real(c_) * real_pow(Real(Rational(q)), -tau_);
  if (sigma_ == 0) return base;
  const Rational sigma = sigma_;
  const BigInt qq = q;
  Real log_part = Real::lazy([sigma, qq](long prec) {
    const long work = prec + 16;
    Interval l = log(Interval(BigInt(qq + 1), work));
    return pow(l, Interval(Rational(-sigma), work));
  });
  return base * log_part;
}

Interval ApproxFunction::enclosure(const BigInt& q, long prec) const {
  require(q >= 1, "psi is defined on q >= 1");
  if (kind_ == Kind::kTable) {
    if (q >= static_cast<unsigned long>(values_.size())) return Interval(values_.back(), prec);
    return Interval(values_[q.get_ui() - 1], prec);
  }
  const long work = prec + 16;
  Interval v = Interval(c_, work);
  if (tau_ != 0) v = v * pow(Interval(q, work), Interval(Rational(-tau_), work));
  if (sigma_ != 0) {
    v = v * pow(log(Interval(BigInt(q + 1), work)), Interval(Rational(-sigma_), work));
  }
  return v;
}

long double ApproxFunction::approx_ld(long double q) const {
  if (kind_ == Kind::kTable) {
    long double idx = std::floor(q);
    size_t i = idx >= static_cast<long double>(values_.size())
                   ? values_.size() - 1
                   : static_cast<size_t>(idx) - 1;
    return static_cast<long double>(values_[i].get_d());
  }
  long double v = static_cast<long double>(c_.get_d()) *
                  std::pow(q, -static_cast<long double>(tau_.get_d()));
  if (sigma_ != 0) {
    v *= std::pow(std::log(q + 1.0L), -static_cast<long double>(sigma_.get_d()));
  }
  return v;
}

double ApproxFunction::approx(double q) const {
  return static_cast<double>(approx_ld(q));
}

std::string ApproxFunction::to_string() const {
  std::ostringstream os;
  if (kind_ == Kind::kTable) {
    os << "table(";
    for (size_t i = 0; i < values_.size(); ++i) {
      os << (i ? " " : "") << values_[i].get_str();
    }
    os << ")";
  } else {
    os << "power_log(C=" << c_.get_str() << ", tau=" << tau_.get_str()
       << ", sigma=" << sigma_.get_str() << ")";
  }
  return os.str();
}

}  // namespace diophlab
