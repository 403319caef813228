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

#include "diophlab/exact_real.hpp"

#include <cctype>
#include <regex>

#include "diophlab/error.hpp"

namespace diophlab {

namespace {

BigInt parse_int(const std::string& s, const std::string& context) {
  BigInt v;
  if (s.empty() || v.set_str(s, 10) != 0) {
    fail(ErrorCode::kConfig, "bad integer '" + s + "' in '" + context + "'");
  }
  return v;
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

}  // namespace

ExactReal::ExactReal(const Rational& value)
    : p_(value.get_num()), q_(0), d_(1), r_(value.get_den()) {}

ExactReal::ExactReal(const BigInt& p, const BigInt& q, const BigInt& d,
                     const BigInt& r)
    : p_(p), q_(q), d_(d), r_(r) {
  require(r != 0, "zero denominator");
  require(d > 0, "radicand must be positive");
  normalize();
}

void ExactReal::normalize() {
  if (q_ != 0) {
    SquarefreeSplit split = squarefree_split(d_);
    q_ *= split.square_root;
    d_ = split.kernel;
    if (d_ == 1) {
      p_ += q_;
      q_ = 0;
    }
  }
  if (q_ == 0) d_ = 1;
  if (r_ < 0) {
    r_ = -r_;
    p_ = -p_;
    q_ = -q_;
  }
  BigInt g;
  mpz_gcd(g.get_mpz_t(), p_.get_mpz_t(), q_.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r_.get_mpz_t());
  if (g > 1) {
    p_ /= g;
    q_ /= g;
    r_ /= g;
  }
}

ExactReal ExactReal::parse(const std::string& text) {
  const std::string s = strip_spaces(text);
  static const std::regex kRational(R"(^([+-]?\d+)(?:/(\d+))?$)");
  static const std::regex kSqrt(R"(^([+-]?\d+\*)?sqrt\((\d+)\)(?:/(\d+))?$)");
  static const std::regex kFull(
      R"(^\(([+-]?\d+)([+-])(\d+\*)?sqrt\((\d+)\)\)/(\d+)$)");
  std::smatch m;
  if (std::regex_match(s, m, kRational)) {
    BigInt num = parse_int(m[1].str(), text);
    BigInt den = m[2].matched ? parse_int(m[2].str(), text) : BigInt(1);
    if (den == 0) fail(ErrorCode::kConfig, "zero denominator in '" + text + "'");
    Rational v(num, den);
    v.canonicalize();
    return ExactReal(v);
  }
  if (std::regex_match(s, m, kSqrt)) {
    BigInt q = 1;
    if (m[1].matched) {
      std::string c = m[1].str();
      c.pop_back();
      q = parse_int(c, text);
    }
    BigInt d = parse_int(m[2].str(), text);
    BigInt r = m[3].matched ? parse_int(m[3].str(), text) : BigInt(1);
    if (r == 0) fail(ErrorCode::kConfig, "zero denominator in '" + text + "'");
    if (d == 0) return ExactReal(0L);
    return ExactReal(0, q, d, r);
  }
  if (std::regex_match(s, m, kFull)) {
    BigInt p = parse_int(m[1].str(), text);
    BigInt q = 1;
    if (m[3].matched) {
      std::string c = m[3].str();
      c.pop_back();
      q = parse_int(c, text);
    }
    if (m[2].str() == "-") q = -q;
    BigInt d = parse_int(m[4].str(), text);
    BigInt r = parse_int(m[5].str(), text);
    if (r == 0) fail(ErrorCode::kConfig, "zero denominator in '" + text + "'");
    if (d == 0) {
      Rational v(p, r);
      v.canonicalize();
      return ExactReal(v);
    }
    return ExactReal(p, q, d, r);
  }
  if (s.size() > 1 && (s[0] == '-' || s[0] == '+') && s[1] != '-' && s[1] != '+') {
    ExactReal v = parse(s.substr(1));
    if (s[0] == '+') return v;
    return ExactReal(-v.p_, -v.q_, v.d_, v.r_);
  }
  fail(ErrorCode::kConfig, "cannot parse exact real '" + text + "'");
}

Rational ExactReal::as_rational() const {
  require(is_rational(), "value is not rational");
  Rational v(p_, r_);
  v.canonicalize();
  return v;
}

SurdSum ExactReal::to_surd() const {
  Rational inv_r(BigInt(1), r_);
  inv_r.canonicalize();
  SurdSum out(Rational(p_) * inv_r);
  if (q_ != 0) out += SurdSum::scaled_sqrt(Rational(q_) * inv_r, d_);
  return out;
}

Interval ExactReal::evaluate(long bits) const {
  return to_surd().evaluate_to_width(bits, Precision{bits, std::max<long>(4096, 4 * bits)});
}

double ExactReal::approx() const { return to_surd().approx(); }

std::string ExactReal::to_string() const {
  if (q_ == 0) {
    return r_ == 1 ? p_.get_str() : p_.get_str() + "/" + r_.get_str();
  }
  BigInt mag = q_ < 0 ? BigInt(-q_) : q_;
  return "(" + p_.get_str() + (q_ < 0 ? "-" : "+") + mag.get_str() + "*sqrt(" +
         d_.get_str() + "))/" + r_.get_str();
}

ExactReal to_exact_real(const SurdSum& value) {
  if (value.is_rational()) return ExactReal(value.rational_part());
  require(value.terms().size() == 1, "value has more than one radical");
  const Rational& a = value.rational_part();
  const Rational& b = value.terms()[0].second;
  // a + b sqrt(D) over the common denominator.
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
  BigInt p = a.get_num() * (r / a.get_den());
  BigInt q = b.get_num() * (r / b.get_den());
  return ExactReal(p, q, value.terms()[0].first, r);
}

}  // namespace diophlab
