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

// 128-bit fixed-point enclosures of reals modulo 1, used by the enumeration
// kernels. A ModOne {base, err} asserts that the value mod 1 lies in the arc
// [base, base + err] * 2^-128 taken modulo 2^128. Tests return kUnknown when
// the enclosure is too coarse; callers then fall back to exact arithmetic.

#ifndef DIOPHLAB_FIXED_HPP_
#define DIOPHLAB_FIXED_HPP_

#include <cstdint>

#include "diophlab/real.hpp"

namespace diophlab {

using u128 = unsigned __int128;

enum class Tri { kNo = 0, kYes = 1, kUnknown = 2 };

constexpr u128 kHalf = u128(1) << 127;
// Enclosures wider than this are treated as uninformative.
constexpr u128 kMaxErr = u128(1) << 100;

struct ModOne {
  u128 base = 0;
  u128 err = 0;
  bool valid = true;
};

ModOne mod_one(const SurdSum& x);
ModOne mod_one(const Interval& x);

inline ModOne add(ModOne a, ModOne b) {
  ModOne r;
  r.base = a.base + b.base;
  r.err = a.err + b.err;
  r.valid = a.valid && b.valid && r.err < kMaxErr;
  return r;
}

inline ModOne negate(ModOne a) {
  ModOne r;
  r.base = -(a.base + a.err);
  r.err = a.err;
  r.valid = a.valid;
  return r;
}

// m * a for a signed 64-bit multiplier.
inline ModOne scale(ModOne a, int64_t m) {
  if (m < 0) return negate(scale(a, -m));
  const u128 um = static_cast<u128>(static_cast<uint64_t>(m));
  ModOne r;
  r.base = a.base * um;
  r.err = a.err * um;
  r.valid = a.valid && (m == 0 || a.err <= kMaxErr / um);
  return r;
}

// Enclosure of the distance to the nearest integer, in units of 2^-128.
struct DistBound {
  u128 lo = 0;
  u128 hi = kHalf;
};

inline DistBound distance(ModOne a) {
  if (!a.valid) return DistBound{0, kHalf};
  auto d = [](u128 u) -> u128 { return u <= kHalf ? u : u128(0) - u; };
  const u128 top = a.base + a.err;
  const bool has_zero = static_cast<u128>(u128(0) - a.base) <= a.err;
  const bool has_half = static_cast<u128>(kHalf - a.base) <= a.err;
  const u128 d0 = d(a.base);
  const u128 d1 = d(top);
  DistBound out;
  out.lo = has_zero ? 0 : (d0 < d1 ? d0 : d1);
  out.hi = has_half ? kHalf : (d0 > d1 ? d0 : d1);
  return out;
}

// Threshold t in [0, 1/2] as floor/ceil in units of 2^-128. Thresholds above
// 1/2 are accepted everywhere: every distance is at most 1/2.
struct FixedThreshold {
  u128 lo = 0;
  u128 hi = 0;
  bool above_half = false;
};

FixedThreshold fixed_threshold(const Interval& t);
FixedThreshold fixed_threshold(const Real& t, long prec = 192);

// Is the distance strictly below the threshold?
inline Tri less(DistBound d, const FixedThreshold& t) {
  if (t.above_half) return Tri::kYes;
  if (d.hi < t.lo) return Tri::kYes;
  if (d.lo >= t.hi) return Tri::kNo;
  return Tri::kUnknown;
}

// Lower and upper bounds on the distance as long doubles.
long double dist_lo_ld(const DistBound& d);
long double dist_hi_ld(const DistBound& d);

}  // namespace diophlab

#endif  // DIOPHLAB_FIXED_HPP_
