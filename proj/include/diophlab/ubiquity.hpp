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


// Resonant points p/q in [0,1]^n with ||p^ A~|| < psi(q)/2, the ubiquity
// radius rho, and the measured fraction of a ball covered by the level-t
// balls B(p/q, rho(k^t)), k^(t-1) < q <= k^t.

#ifndef DIOPHLAB_UBIQUITY_HPP_
#define DIOPHLAB_UBIQUITY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "diophlab/subspace.hpp"

namespace diophlab {

struct ResonantPoint {
  HattedVector p_hat;
  int64_t weight = 0;      // |p^| = q
  double closeness = 0;    // ||p^ A~||
  std::vector<Rational> point() const;
};

// Every resonant point with q <= q_max whose p/q lies in the unit cube
// translated by `origin` (all zeros by default), ordered by (q, p).
std::vector<ResonantPoint> resonant_points(const AffineSubspaceSpec& spec,
                                           const ApproxFunction& psi, int64_t q_max,
                                           const StripIndex& origin = {},
                                           const Precision& prec = Precision{});

std::string resonant_csv(const std::vector<ResonantPoint>& points, const ApproxFunction& psi,
                         int d, int n);

// 2^((d-n)/n) / (q^((n+1)/n) psi(q)^((d-n)/n)).
Real rho(const BigInt& q, const ApproxFunction& psi, int d, int n);

// 2^((n+d)/(n+1)) 3^((n+d+2)/(n+1)).
Interval min_k(int n, int d);

struct CoverOptions {
  uint64_t samples = 10000;
  uint64_t seed = 1;
  int threads = 1;
  Rational rho_scale{1};
};

struct CoverReport {
  int64_t k = 0;
  int t = 0;
  Ball ball;
  uint64_t samples = 0;
  uint64_t hits = 0;
  double fraction = 0;
  double ci_low = 0;  // 95% Wilson interval
  double ci_high = 0;
  double half_width = 0;
  double rho = 0;
  uint64_t seed = 0;
};

// Fraction of jittered sample points of the ball lying in some open sup-norm
// ball B(p/q, rho_scale rho(k^t)) with k^(t-1) < q <= k^t resonant.
CoverReport covering_fraction(const Ball& ball, int64_t k, int t, const ApproxFunction& psi,
                              const AffineSubspaceSpec& spec, const CoverOptions& opts,
                              const Precision& prec = Precision{});

std::string cover_json(const CoverReport& r);

struct RegularityReport {
  bool ok = true;
  std::vector<double> ratios;  // Psi(k^(t+1)) / Psi(k^t)
};

// Psi(k^(t+1)) <= Psi(k^t) / k for every t in the range, certified.
RegularityReport regularity_check(const ApproxFunction& psi, const AffineSubspaceSpec& spec,
                                  int64_t k, const std::vector<int>& t_range);

// 95% Wilson score interval for hits out of n.
void wilson_interval(uint64_t hits, uint64_t n, double* lo, double* hi);

}  // namespace diophlab

#endif  // DIOPHLAB_UBIQUITY_HPP_
