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


// Integer solutions of systems of linear forms
//
//   |sum_j beta_ij x_j| < C_i  (i < k),   |sum_j beta_kj x_j| <= C_k,
//
// and the covering witnesses built from them: for x in [0,1]^n and N >= 1 a
// hatted vector (q, p) with q <= N, ||p^ A~|| < psi(N)/2 and q x close to p.

#ifndef DIOPHLAB_LATTICE_HPP_
#define DIOPHLAB_LATTICE_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "diophlab/subspace.hpp"

namespace diophlab {

using IntPoint = std::vector<int64_t>;

struct LinearFormsSystem {
  std::vector<std::vector<Real>> beta;  // k x k
  std::vector<Real> bounds;             // C_1..C_k

  int size() const { return static_cast<int>(bounds.size()); }
  // Certified test of all k inequalities at x.
  bool satisfied_by(const IntPoint& x, const Precision& budget = Precision{}) const;
};

enum class DetStatus {
  kCertified,  // |det| <= prod C certified
  kTie,        // enclosures overlap within 2^-64
  kViolated,   // prod C < |det| certified
  kUndecided,
};

struct DetCheck {
  DetStatus status = DetStatus::kUndecided;
  Interval det{64};
  Interval product{64};
};

DetCheck check_determinant(const LinearFormsSystem& sys, long bits = 256);
std::string det_status_name(DetStatus s);

using CandidateFilter = std::function<bool(const IntPoint&)>;

struct SolveResult {
  IntPoint x;
  uint64_t candidates = 0;  // lattice points certified or rejected
  bool exhaustive = false;  // found by the box fallback
};

// Nonzero integer solution, certified. Candidates rejected by `accept` are
// skipped. Throws kDomain when the determinant condition is violated and
// kSolverIncomplete when the search budget runs out without a solution.
SolveResult solve_linear_forms(const LinearFormsSystem& sys, uint64_t budget = 10000000,
                               const CandidateFilter& accept = {},
                               const Precision& prec = Precision{});

// Every nonzero solution inside the box |x_j| <= radius, in lexicographic
// order.
std::vector<IntPoint> box_solutions(const LinearFormsSystem& sys, int64_t radius,
                                    const Precision& prec = Precision{});

// Smallest r with every solution inside |x_j| <= r, from
// |x_j| <= sum_i |beta^-1_ji| C_i.
int64_t solution_box_radius(const LinearFormsSystem& sys);

// A k x k system with entries in Q and Q(sqrt(D)), D in {2, 3, 5, 6, 7}, and
// bounds chosen so that |det| <= prod C is certified with a margin, redrawn
// until solution_box_radius <= max_radius. Deterministic in (seed, index).
LinearFormsSystem random_certified_system(uint64_t seed, uint64_t index, int k,
                                          int64_t max_radius);

// The (d+1) x (d+1) system in the unknowns (r_1..r_(d-n), p_1..p_n, q):
//
//   -r_v + sum_i p_i a_(i,v) + q a0_v   bound psi(N)/2
//   -p_i + q x_i                        bound 2^((d-n)/n) / (N^(1/n) psi(N)^((d-n)/n))
//   q                                   bound N (non-strict)
LinearFormsSystem build_containment_system(const SurdVector& x, int64_t N,
                                           const ApproxFunction& psi,
                                           const AffineSubspaceSpec& spec);

struct CoveringWitness {
  HattedVector p_hat;
  std::vector<int64_t> r;
  DetStatus precondition = DetStatus::kUndecided;
  double closeness = 0;         // ||p^ A~||
  double offset = 0;            // max_i |q x_i - p_i|
  double proof_radius = 0;      // bound on |q x_i - p_i|
  double statement_radius = 0;  // proof_radius / N
  bool closeness_ok = false;    // ||p^ A~|| < psi(N)/2
  bool radius_ok = false;       // |q x_i - p_i| < proof_radius
  bool height_ok = false;       // 1 <= q, 0 <= p_i, |p^| <= N
  bool statement_radius_ok = false;  // |x_i - p_i/q| < statement_radius

  bool valid() const { return closeness_ok && radius_ok && height_ok; }
};

CoveringWitness covering_witness(const SurdVector& x, int64_t N, const ApproxFunction& psi,
                                 const AffineSubspaceSpec& spec,
                                 uint64_t budget = 10000000,
                                 const Precision& prec = Precision{});

std::string witness_json(const SurdVector& x, const CoveringWitness& w);

}  // namespace diophlab

#endif  // DIOPHLAB_LATTICE_HPP_
