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

// Affine subspaces L = {(x, x A + a0) : x in R^n} of R^d and the geometry
// built on them: hatted vectors (q, p), the lift x -> (x, (1, x) A~), the
// neighbourhood radius Psi(q) and integer strip translations.

#ifndef DIOPHLAB_SUBSPACE_HPP_
#define DIOPHLAB_SUBSPACE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "diophlab/approx_function.hpp"
#include "diophlab/exact_real.hpp"

namespace diophlab {

using SurdVector = std::vector<SurdSum>;
using SurdMatrix = std::vector<SurdVector>;

class AffineSubspaceSpec {
 public:
  AffineSubspaceSpec() = default;
  // tilt is n x (d - n), shift has d - n entries.
  AffineSubspaceSpec(int d, int n, SurdMatrix tilt, SurdVector shift);

  int d() const { return d_; }
  int n() const { return n_; }
  int codim() const { return d_ - n_; }
  const SurdMatrix& tilt() const { return tilt_; }
  const SurdVector& shift() const { return shift_; }

  // Row 0 is the shift, rows 1..n the tilt rows.
  const SurdSum& augmented(int row, int col) const {
    return row == 0 ? shift_[col] : tilt_[row - 1][col];
  }
  SurdMatrix augmented_matrix() const;

  // |A|: largest absolute value of a tilt entry.
  SurdSum tilt_norm() const;
  bool tilt_is_zero() const;

  std::string to_text() const;
  static AffineSubspaceSpec from_text(const std::string& text);
  static AffineSubspaceSpec load(const std::string& path);
  void save(const std::string& path) const;

  friend bool operator==(const AffineSubspaceSpec& a, const AffineSubspaceSpec& b) {
    return a.d_ == b.d_ && a.n_ == b.n_ && a.tilt_ == b.tilt_ && a.shift_ == b.shift_;
  }

 private:
  int d_ = 2;
  int n_ = 1;
  SurdMatrix tilt_;
  SurdVector shift_;
};

// The line y = slope * x + offset in the plane.
AffineSubspaceSpec line_spec(const SurdSum& slope, const SurdSum& offset = SurdSum());

struct HattedVector {
  int64_t q = 1;
  std::vector<int64_t> p;
  // Sup norm max(q, |p_i|).
  int64_t height() const;
};

struct Ball {
  SurdVector center;
  Rational radius;
  // Lebesgue measure (2 radius)^n in the sup norm.
  Rational measure() const;
};

using StripIndex = std::vector<int64_t>;

// Largest distance to the nearest integer over the components, as an
// enclosure of width at most 2^-bits.
Interval nearest_int_dist(const SurdVector& x, long bits,
                          const Precision& budget = Precision{});
// The same quantity exactly.
SurdSum nearest_int_dist_exact(const SurdVector& x,
                               const Precision& budget = Precision{});

// q row_0(A~) + sum_i p_i row_i(A~), exactly.
SurdVector hat_dot(const HattedVector& p_hat, const AffineSubspaceSpec& spec);

// (x, (1, x) A~).
SurdVector lift(const SurdVector& x, const AffineSubspaceSpec& spec);

// Psi(q) = psi(q) / (2 n |A| q). Throws kDegenerateTilt when A = 0.
Real psi_capital(const BigInt& q, const ApproxFunction& psi,
                 const AffineSubspaceSpec& spec);

// Same tilt, shift a0 + v A.
AffineSubspaceSpec strip_translate(const AffineSubspaceSpec& spec, const StripIndex& v);

}  // namespace diophlab

#endif  // DIOPHLAB_SUBSPACE_HPP_
