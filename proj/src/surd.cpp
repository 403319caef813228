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

#include "diophlab/surd.hpp"

#include <algorithm>
#include <sstream>

#include "diophlab/error.hpp"

namespace diophlab {

namespace {

constexpr unsigned long kTrialLimit = 2000000;

long magnitude_bits(const SurdSum& x) {
  long bits = 0;
  auto grow = [&bits](const Rational& r) {
    if (r == 0) return;
    long b = static_cast<long>(mpz_sizeinbase(r.get_num_mpz_t(), 2));
    bits = std::max(bits, b);
  };
  grow(x.rational_part());
  for (const auto& [d, c] : x.terms()) {
    grow(c);
    bits = std::max(bits, static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2)));
  }
  return bits + static_cast<long>(x.terms().size());
}

}  // namespace

SquarefreeSplit squarefree_split(const BigInt& n) {
  require(n > 0, "squarefree_split needs a positive integer");
  BigInt rest = n;
  BigInt s = 1;
  BigInt d = 1;
  unsigned long p = 2;
  for (; p <= kTrialLimit; p += (p == 2 ? 1 : 2)) {
    BigInt pp = BigInt(p) * p;
    if (pp * p > rest) break;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p) == 0) continue;
    int e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    for (int i = 0; i + 1 < e; i += 2) s *= p;
    if (e % 2 == 1) d *= p;
  }
  if (rest > 1) {
    // Every prime factor of rest exceeds the trial bound.
    BigInt bound = BigInt(p);
    if (p > kTrialLimit && rest >= bound * bound * bound) {
      fail(ErrorCode::kDomain, "radicand too large to split into square and squarefree parts");
    }
    if (mpz_perfect_square_p(rest.get_mpz_t()) != 0) {
      BigInt r;
      mpz_sqrt(r.get_mpz_t(), rest.get_mpz_t());
      s *= r;
    } else {
      d *= rest;
    }
  }
  return {s, d};
}

SurdSum SurdSum::scaled_sqrt(const Rational& c, const BigInt& n) {
  require(n >= 0, "square root of a negative integer");
  SurdSum out;
  if (n == 0 || c == 0) return out;
  SquarefreeSplit split = squarefree_split(n);
  Rational coef = c * Rational(split.square_root);
  if (split.kernel == 1) {
    out.rational_ = coef;
  } else {
    out.terms_.emplace_back(split.kernel, coef);
  }
  return out;
}

void SurdSum::add_term(const BigInt& d, const Rational& c) {
  if (c == 0) return;
  if (d == 1) {
    rational_ += c;
    return;
  }
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), d,
      [](const Term& t, const BigInt& key) { return t.first < key; });
  if (it != terms_.end() && it->first == d) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, Term(d, c));
  }
}

SurdSum SurdSum::operator-() const {
  SurdSum out = *this;
  out.rational_ = -out.rational_;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

SurdSum& SurdSum::operator+=(const SurdSum& rhs) {
  rational_ += rhs.rational_;
  for (const auto& [d, c] : rhs.terms_) add_term(d, c);
  return *this;
}

SurdSum& SurdSum::operator-=(const SurdSum& rhs) {
  rational_ -= rhs.rational_;
  for (const auto& [d, c] : rhs.terms_) add_term(d, -c);
  return *this;
}

SurdSum& SurdSum::operator*=(const Rational& rhs) {
  if (rhs == 0) {
    rational_ = 0;
    terms_.clear();
    return *this;
  }
  rational_ *= rhs;
  for (auto& t : terms_) t.second *= rhs;
  return *this;
}

SurdSum& SurdSum::operator*=(const SurdSum& rhs) {
  SurdSum out;
  out.rational_ = rational_ * rhs.rational_;
  for (const auto& [d, c] : terms_) out.add_term(d, c * rhs.rational_);
  for (const auto& [d, c] : rhs.terms_) out.add_term(d, c * rational_);
  for (const auto& [d1, c1] : terms_) {
    for (const auto& [d2, c2] : rhs.terms_) {
      // sqrt(g a) sqrt(g b) = g sqrt(a b), with a b squarefree.
      BigInt g;
      mpz_gcd(g.get_mpz_t(), d1.get_mpz_t(), d2.get_mpz_t());
      BigInt ab = (d1 / g) * (d2 / g);
      out.add_term(ab, c1 * c2 * Rational(g));
    }
  }
  *this = std::move(out);
  return *this;
}

SurdSum SurdSum::inverse() const {
  if (is_zero()) fail(ErrorCode::kDomain, "inverse of zero");
  if (is_rational()) return SurdSum(Rational(1) / rational_);
  if (terms_.size() != 1) {
    fail(ErrorCode::kDomain, "inverse supported only for a + b*sqrt(D)");
  }
  const Rational& a = rational_;
  const Rational& b = terms_[0].second;
  const BigInt& d = terms_[0].first;
  Rational norm = a * a - b * b * Rational(d);
  SurdSum conj = *this;
  conj.terms_[0].second = -b;
  conj *= Rational(1) / norm;
  return conj;
}

Interval SurdSum::evaluate(long prec) const {
  const long work = prec + 8 + static_cast<long>(terms_.size());
  Interval acc(rational_, work);
  for (const auto& [d, c] : terms_) {
    acc += Interval(c, work) * diophlab::sqrt(Interval(d, work));
  }
  return with_precision(acc, prec);
}

Interval SurdSum::evaluate_to_width(long bits, const Precision& budget) const {
  long prec = std::max<long>(bits + 16 + magnitude_bits(*this), 64);
  while (true) {
    Interval v = evaluate(prec);
    if (v.width_at_most(bits)) return v;
    if (prec >= budget.max_bits) break;
    prec = std::min(prec * 2, budget.max_bits);
  }
  fail(ErrorCode::kPrecisionExhausted, "cannot reach requested width for " + to_string());
}

double SurdSum::approx() const { return evaluate(64).mid(); }

int SurdSum::sign(const Precision& budget) const {
  if (is_rational()) return sgn(rational_);
  long prec = std::max<long>(budget.bits, 64);
  while (true) {
    Interval v = evaluate(prec);
    if (v.positive()) return 1;
    if (v.negative()) return -1;
    if (prec >= budget.max_bits) break;
    prec = std::min(prec * 2, budget.max_bits);
  }
  fail(ErrorCode::kPrecisionExhausted, "sign undecided within budget for " + to_string());
}

BigInt SurdSum::floor(const Precision& budget) const {
  if (is_rational()) {
    BigInt f;
    mpz_fdiv_q(f.get_mpz_t(), rational_.get_num_mpz_t(), rational_.get_den_mpz_t());
    return f;
  }
  Interval v = evaluate(std::max<long>(64, magnitude_bits(*this) + 64));
  BigInt f;
  mpfr_get_z(f.get_mpz_t(), v.lo(), MPFR_RNDD);
  // Irrational values are never integers, so both signs below are nonzero.
  for (int guard = 0; guard < 64; ++guard) {
    if ((*this - SurdSum(f)).sign(budget) < 0) {
      f -= 1;
    } else if ((SurdSum(f) + SurdSum(1L) - *this).sign(budget) <= 0) {
      f += 1;
    } else {
      return f;
    }
  }
  fail(ErrorCode::kInternal, "floor search did not converge");
}

BigInt SurdSum::ceil(const Precision& budget) const {
  return -((-*this).floor(budget));
}

SurdSum SurdSum::nearest_int_distance(const Precision& budget) const {
  BigInt f = floor(budget);
  SurdSum frac = *this - SurdSum(f);
  SurdSum other = SurdSum(1L) - frac;
  return exact_leq(frac, other, budget) ? frac : other;
}

SurdSum SurdSum::abs(const Precision& budget) const {
  return sign(budget) < 0 ? -*this : *this;
}

std::string SurdSum::to_string() const {
  std::ostringstream os;
  os << rational_.get_str();
  for (const auto& [d, c] : terms_) {
    Rational mag = c < 0 ? Rational(-c) : c;
    os << (c < 0 ? " - " : " + ") << mag.get_str() << "*sqrt(" << d.get_str() << ")";
  }
  return os.str();
}

SurdSum operator+(SurdSum a, const SurdSum& b) { return a += b; }
SurdSum operator-(SurdSum a, const SurdSum& b) { return a -= b; }
SurdSum operator*(SurdSum a, const SurdSum& b) { return a *= b; }
SurdSum operator*(SurdSum a, const Rational& b) { return a *= b; }
SurdSum operator*(const Rational& a, SurdSum b) { return b *= a; }
SurdSum operator/(SurdSum a, const Rational& b) {
  if (b == 0) fail(ErrorCode::kDomain, "division by zero");
  return a *= Rational(1) / b;
}

bool exact_less(const SurdSum& a, const SurdSum& b, const Precision& budget) {
  return (b - a).sign(budget) > 0;
}

bool exact_leq(const SurdSum& a, const SurdSum& b, const Precision& budget) {
  return (b - a).sign(budget) >= 0;
}

}  // namespace diophlab
