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

// Counter-based random streams and the jittered-grid point sampler.
//
// Stream(seed, id) is a SplitMix64 sequence keyed by both values, so sample
// i always sees the same numbers whichever worker draws it.

#ifndef DIOPHLAB_RNG_HPP_
#define DIOPHLAB_RNG_HPP_

#include <cstdint>
#include <vector>

#include "diophlab/fixed.hpp"
#include "diophlab/subspace.hpp"

namespace diophlab {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Stream {
 public:
  Stream(uint64_t seed, uint64_t id) {
    uint64_t s = seed;
    state_ = splitmix64(s) ^ (id * 0xd1b54a32d192ed03ULL);
    splitmix64(state_);
  }
  uint64_t next() { return splitmix64(state_); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1p-53; }
  // Uniform integer in [lo, hi].
  int64_t uniform_int(int64_t lo, int64_t hi);
  // Uniform integer in [0, bound), bound >= 1.
  BigInt below(const BigInt& bound);

 private:
  uint64_t state_;
};

// A point of [0,1]^n whose coordinates are X_i / 2^256 with X_i odd, so
// every denominator is exactly 2^256.
struct DyadicPoint {
  static constexpr int kBits = 256;
  std::vector<BigInt> num;

  SurdVector to_surd() const;
  Rational coord(size_t i) const;
  // Fixed-point fraction and integer part of coordinate i: the coordinate is
  // (high + low 2^-128) 2^-128 with high < 2^128 unless it equals 1.
  u128 high(size_t i) const;
  double approx(size_t i) const;
};

// N jittered-grid points in [0,1]^n. For n = 1 point i lies in cell
// [i/N, (i+1)/N); for n > 1 cells form a grid when N is an n-th power and the
// points are uniform otherwise.
DyadicPoint sample_point(uint64_t seed, uint64_t index, uint64_t count, int n);

}  // namespace diophlab

#endif  // DIOPHLAB_RNG_HPP_
