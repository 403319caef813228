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


// Rational points near an affine subspace, counted exactly:
//
//   P(q, delta, x0, eta) = #{p in N^n : ||p^ A~|| < delta, |p - q x0| < q eta}
//
// together with the level count over q <= k^(t-1) and the upper bounds that
// these counts are checked against.

#ifndef DIOPHLAB_COUNTING_HPP_
#define DIOPHLAB_COUNTING_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "diophlab/subspace.hpp"

namespace diophlab {

constexpr uint64_t kDefaultTestBudget = 20000000000ULL;

struct CountConfig {
  AffineSubspaceSpec subspace;
  int64_t q = 1;
  Real delta;
  Ball ball;
};

// p ranges over positive integers in the open box |p - q x0| < q eta.
uint64_t count_exact(const CountConfig& cfg, int threads = 1,
                     uint64_t budget = kDefaultTestBudget,
                     const Precision& prec = Precision{});

// 3^d delta^(d-n) q^n m(B) + C delta^(d-n-omega) log(1/delta - 1)^n.
// Throws kDomain unless 0 < delta < 1/2.
Interval lemma3_bound(int64_t q, const Real& delta, const Rational& measure, double omega,
                      double c, int d, int n);

// C for the bound above from a constant C_sum for the MAD sums over
// j in Z^(d-n): C = 3^(d-n) C_sum.
double lemma3_constant(double c_sum, int d, int n);

struct AggregateConfig {
  AffineSubspaceSpec subspace;
  int64_t k = 2;
  int t = 1;
  ApproxFunction psi;
  Ball ball;
};

// #{(q, p) : 1 <= q <= k^(t-1), p in Z_{>=0}^n, ||p^ A~|| < psi(k^t)/2,
// p/q in the closed ball}.
uint64_t count_aggregate(const AggregateConfig& cfg, int threads = 1,
                         uint64_t budget = kDefaultTestBudget,
                         const Precision& prec = Precision{});

// 3^(d+n+2) psi(k^t)^(d-n) k^((t-1)(n+1)) m(B).
Interval theorem4_bound(int64_t k, int t, const ApproxFunction& psi, const Rational& measure,
                        int d, int n);

struct CountingRow {
  std::string kind;  // "aggregate" or "single"
  size_t ball = 0;
  int64_t k = 0;
  int t = 0;
  int64_t q = 0;
  uint64_t count = 0;
  double bound = 0;   // lower end of the certified bound
  double margin = 0;  // bound - count
  bool pass = false;
};

struct CountingReport {
  std::vector<CountingRow> rows;
  // Per ball: smallest tested t from which every aggregate row passes, or -1.
  std::vector<int> t0;
};

// For every ball and level t: the aggregate count against theorem4_bound and
// P(k^(t-1), psi(k^t)/2, x0, eta) against lemma3_bound with constant c.
CountingReport verify_counting_sweep(const AffineSubspaceSpec& subspace,
                                     const ApproxFunction& psi, int64_t k,
                                     const std::vector<int>& t_range,
                                     const std::vector<Ball>& balls, double c, double omega,
                                     int threads = 1, uint64_t budget = kDefaultTestBudget);

std::string counting_csv(const CountingReport& report);

}  // namespace diophlab

#endif  // DIOPHLAB_COUNTING_HPP_
