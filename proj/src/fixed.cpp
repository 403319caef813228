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

#include "diophlab/fixed.hpp"

#include <cmath>

namespace diophlab {

namespace {

// Low 128 bits of a non-negative integer.
u128 low_bits(const BigInt& v) {
  BigInt m;
  mpz_fdiv_r_2exp(m.get_mpz_t(), v.get_mpz_t(), 128);
  BigInt hi;
  mpz_fdiv_q_2exp(hi.get_mpz_t(), m.get_mpz_t(), 64);
  BigInt lo;
  mpz_fdiv_r_2exp(lo.get_mpz_t(), m.get_mpz_t(), 64);
  u128 h = static_cast<u128>(mpz_get_ui(hi.get_mpz_t()));
  u128 l = static_cast<u128>(mpz_get_ui(lo.get_mpz_t()));
  return (h << 64) | l;
}

BigInt scaled_floor(mpfr_srcptr v) {
  mpfr_t t;
  mpfr_init2(t, mpfr_get_prec(v));
  mpfr_mul_2ui(t, v, 128, MPFR_RNDD);
  BigInt out;
  mpfr_get_z(out.get_mpz_t(), t, MPFR_RNDD);
  mpfr_clear(t);
  return out;
}

BigInt scaled_ceil(mpfr_srcptr v) {
  mpfr_t t;
  mpfr_init2(t, mpfr_get_prec(v));
  mpfr_mul_2ui(t, v, 128, MPFR_RNDU);
  BigInt out;
  mpfr_get_z(out.get_mpz_t(), t, MPFR_RNDU);
  mpfr_clear(t);
  return out;
}

}  // namespace

ModOne mod_one(const Interval& x) {
  BigInt lo = scaled_floor(x.lo());
  BigInt hi = scaled_ceil(x.hi());
  BigInt err = hi - lo;
  ModOne r;
  if (err >= BigInt(1) << 100) {
    r.valid = false;
    return r;
  }
  r.base = low_bits(lo);
  r.err = low_bits(err);
  return r;
}

ModOne mod_one(const SurdSum& x) {
  long bits = 256;
  if (!x.is_zero()) {
    double mag = std::fabs(x.approx());
    if (mag > 1.0) bits += static_cast<long>(std::log2(mag)) + 8;
  }
  return mod_one(x.evaluate(bits));
}

FixedThreshold fixed_threshold(const Interval& t) {
  FixedThreshold out;
  Interval half(Rational(1, 2), 64);
  if (certainly_less(half, t)) {
    out.above_half = true;
    return out;
  }
  BigInt lo = mpfr_sgn(t.lo()) <= 0 ? BigInt(0) : scaled_floor(t.lo());
  BigInt hi = scaled_ceil(t.hi());
  BigInt cap = BigInt(1) << 127;
  if (lo > cap) lo = cap;
  if (hi > cap) hi = cap + 1;
  out.lo = low_bits(lo);
  out.hi = low_bits(hi);
  return out;
}

FixedThreshold fixed_threshold(const Real& t, long prec) {
  return fixed_threshold(t.eval(prec));
}

long double dist_lo_ld(const DistBound& d) {
  // Truncating conversion rounds toward zero, which is downward here.
  long double v = static_cast<long double>(d.lo >> 64) * 0x1p-64L +
                  static_cast<long double>(static_cast<uint64_t>(d.lo)) * 0x1p-128L;
  return std::nextafter(v, 0.0L);
}

long double dist_hi_ld(const DistBound& d) {
  long double v = static_cast<long double>(d.hi >> 64) * 0x1p-64L +
                  static_cast<long double>(static_cast<uint64_t>(d.hi)) * 0x1p-128L;
  return std::nextafter(v, 1.0L) + 0x1p-120L;
}

}  // namespace diophlab
