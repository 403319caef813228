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

// Multiplicative Diophantine quantities of a real m x n matrix A whose rows
// are dotted with integer vectors j in Z^n:
//
//   P(j) = prod_u || j . row_u(A) ||
//
// mad_functional gives |j|^omega P(j), estimate_exponent fits the decay of
// the record minima of P, and mad_sum adds 1/P(j) over 0 < |j| <= J.

#ifndef DIOPHLAB_MADSUM_HPP_
#define DIOPHLAB_MADSUM_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diophlab/subspace.hpp"

namespace diophlab {

using IntVector = std::vector<int64_t>;

// Calls fn(j) for every j with sup norm in [lo, hi], shells in increasing
// norm, lexicographic within a shell, first nonzero coordinate positive.
template <class F>
void for_each_half_shell(int n, int64_t lo, int64_t hi, F&& fn);

// Number of canonical vectors with sup norm exactly N.
uint64_t half_shell_size(int n, int64_t N);

Interval mad_functional(const SurdMatrix& a, const IntVector& j, const Rational& omega,
                        long bits = 64, const Precision& budget = Precision{});

struct RecordMinimum {
  int64_t norm = 0;
  IntVector j;
  long double lo = 0;  // certified enclosure of P(j)
  long double hi = 0;
};

struct MadDiagnostics {
  int64_t j_max = 0;
  std::vector<RecordMinimum> records;
  bool omega_infinite = false;  // some P(j) = 0
  IntVector zero_witness;
  double fitted_omega = 0;
  double omega_stderr = 0;
  IntVector infimum_witness;
  double infimum_value = 0;  // |j|^omega_hat P(j) at the witness
  uint64_t evaluated = 0;
};

MadDiagnostics estimate_exponent(const SurdMatrix& a, int64_t j_max, int threads = 1,
                                 const Precision& budget = Precision{});

// Certified sums of 1/P(j) over 0 < |j| <= J for each J of the grid
// (ascending). Throws kRationalResonance when some P(j) vanishes.
std::vector<Interval> mad_sum_series(const SurdMatrix& a, const std::vector<int64_t>& grid,
                                     int threads = 1, const Precision& budget = Precision{});
Interval mad_sum(const SurdMatrix& a, int64_t J, int threads = 1,
                 const Precision& budget = Precision{});

struct SumBoundRow {
  int64_t J = 0;
  Interval sum{64};
  double bound = 0;  // C J^omega (log J)^l
  double slack = 0;  // bound - upper end of sum
  bool ok = false;
};

struct SumConstantFit {
  double c = 0;
  std::vector<SumBoundRow> rows;
};

// Smallest C (up to a 2^-32 relative margin) with mad_sum(J) <= C J^omega
// (log J)^l on the grid; every slack is then positive.
SumConstantFit fit_sum_constant(const SurdMatrix& a, double omega, int l,
                                const std::vector<int64_t>& grid, int threads = 1);
// Evaluates a frozen C on another grid.
std::vector<SumBoundRow> check_sum_bound(const SurdMatrix& a, double omega, int l, double c,
                                         const std::vector<int64_t>& grid, int threads = 1);

// |sum_{a = a0}^{a0 + k - 1} e(a x)|.
Interval progression_exp_sum(const SurdSum& x, int64_t a0, int64_t k, long bits = 64);

// ----------------------------------------------------------------------------

template <class F>
void for_each_half_shell(int n, int64_t lo, int64_t hi, F&& fn) {
  IntVector j(n);
  for (int64_t N = std::max<int64_t>(lo, 1); N <= hi; ++N) {
    // Depth-first in lexicographic order; `hit` records a coordinate of
    // modulus N and `lead` a nonzero coordinate.
    auto rec = [&](auto&& self, int pos, bool hit, bool lead) -> void {
      if (pos == n) {
        if (hit) fn(static_cast<const IntVector&>(j));
        return;
      }
      const bool last = pos == n - 1;
      for (int64_t v = lead ? -N : 0; v <= N; ++v) {
        const bool at_edge = v == N || v == -N;
        if (last && !hit && !at_edge) continue;
        j[pos] = v;
        self(self, pos + 1, hit || at_edge, lead || v != 0);
      }
    };
    rec(rec, 0, false, false);
  }
}

}  // namespace diophlab

#endif  // DIOPHLAB_MADSUM_HPP_
