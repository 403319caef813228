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

#include "diophlab/rng.hpp"

#include <cmath>

#include "diophlab/error.hpp"

namespace diophlab {

int64_t Stream::uniform_int(int64_t lo, int64_t hi) {
  require(lo <= hi, "uniform_int: empty range");
  const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<int64_t>(next());
  // Rejection keeps the draw exactly uniform.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return lo + static_cast<int64_t>(v % span);
}

BigInt Stream::below(const BigInt& bound) {
  require(bound >= 1, "below: bound must be positive");
  const size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2) + 64;
  BigInt acc = 0;
  for (size_t got = 0; got < bits; got += 64) {
    acc <<= 64;
    acc += BigInt(static_cast<unsigned long>(next()));
  }
  BigInt r;
  mpz_mod(r.get_mpz_t(), acc.get_mpz_t(), bound.get_mpz_t());
  return r;
}

SurdVector DyadicPoint::to_surd() const {
  SurdVector out;
  for (size_t i = 0; i < num.size(); ++i) out.emplace_back(coord(i));
  return out;
}

Rational DyadicPoint::coord(size_t i) const {
  Rational r(num[i], BigInt(1) << kBits);
  r.canonicalize();
  return r;
}

u128 DyadicPoint::high(size_t i) const {
  BigInt h = num[i] >> 128;
  BigInt top = h >> 64;
  BigInt bottom;
  mpz_fdiv_r_2exp(bottom.get_mpz_t(), h.get_mpz_t(), 64);
  return (static_cast<u128>(mpz_get_ui(top.get_mpz_t())) << 64) |
         static_cast<u128>(mpz_get_ui(bottom.get_mpz_t()));
}

double DyadicPoint::approx(size_t i) const { return coord(i).get_d(); }

namespace {

BigInt jitter_in(Stream& s, const BigInt& lo, const BigInt& hi) {
  BigInt x = lo + s.below(hi - lo);
  if (mpz_even_p(x.get_mpz_t()) != 0) x = (x + 1 < hi) ? BigInt(x + 1) : BigInt(x - 1);
  return x;
}

}  // namespace

DyadicPoint sample_point(uint64_t seed, uint64_t index, uint64_t count, int n) {
  require(count >= 1 && index < count, "sample index out of range");
  require(n >= 1, "sample dimension must be positive");
  Stream s(seed, index);
  const BigInt one = BigInt(1) << DyadicPoint::kBits;
  DyadicPoint out;
  auto cell = [&](uint64_t i, uint64_t m) {
    BigInt lo = one * BigInt(static_cast<unsigned long>(i)) / BigInt(static_cast<unsigned long>(m));
    BigInt hi = one * BigInt(static_cast<unsigned long>(i + 1)) / BigInt(static_cast<unsigned long>(m));
    return jitter_in(s, lo, hi);
  };
  if (n == 1) {
    out.num.push_back(cell(index, count));
    return out;
  }
  const uint64_t m = static_cast<uint64_t>(std::llround(std::pow(static_cast<double>(count), 1.0 / n)));
  uint64_t power = 1;
  for (int i = 0; i < n; ++i) power *= m;
  if (power == count) {
    uint64_t rest = index;
    for (int i = 0; i < n; ++i) {
      out.num.push_back(cell(rest % m, m));
      rest /= m;
    }
  } else {
    for (int i = 0; i < n; ++i) out.num.push_back(cell(0, 1));
  }
  return out;
}

}  // namespace diophlab
