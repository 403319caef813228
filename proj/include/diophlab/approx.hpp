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


// psi-approximability of points on the subspace: truncated scans of
// ||q lift(x)|| < psi(q), the sampled measure of approximable points, the
// power-log series classifier with its condensation check, and box-counting
// estimates of the dimension of W(tau) on the subspace.

#ifndef DIOPHLAB_APPROX_HPP_
#define DIOPHLAB_APPROX_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diophlab/fixed.hpp"
#include "diophlab/subspace.hpp"

namespace diophlab {

struct ApproxVerdict {
  SurdVector x;
  std::optional<int64_t> first_q;
  int64_t q_min = 1;
  int64_t Q = 0;
};

// Scans q = q_min..Q for ||q lift(x)|| < psi(q). The threshold table is
// built once and shared by every scan.
class ApproxScanner {
 public:
  ApproxScanner(const AffineSubspaceSpec& spec, const ApproxFunction& psi, int64_t Q,
                int64_t q_min = 1, const Precision& prec = Precision{});
  ApproxVerdict scan(const SurdVector& x) const;

 private:
  AffineSubspaceSpec spec_;
  ApproxFunction psi_;
  int64_t Q_;
  int64_t q_min_;
  Precision prec_;
  std::vector<FixedThreshold> thresholds_;  // index q - q_min
};

ApproxVerdict is_approximable_upto(const SurdVector& x, const AffineSubspaceSpec& spec,
                                   const ApproxFunction& psi, int64_t Q, int64_t q_min = 1,
                                   const Precision& prec = Precision{});

struct MeasurePoint {
  int64_t Q = 0;
  uint64_t hits = 0;
  uint64_t samples = 0;
  double fraction = 0;
  double ci_low = 0;
  double ci_high = 0;
};

// For each Q of the ascending grid, the fraction of jittered dyadic sample
// points x in [0,1]^n approximable within q_min <= q <= Q.
std::vector<MeasurePoint> empirical_measure(const AffineSubspaceSpec& spec,
                                            const ApproxFunction& psi,
                                            const std::vector<int64_t>& grid,
                                            uint64_t samples, uint64_t seed, int threads = 1,
                                            int64_t q_min = 1,
                                            const Precision& prec = Precision{});

std::string measure_csv(const std::vector<MeasurePoint>& rows);

enum class SeriesVerdict { kDiverges, kConverges };

// sum_q psi(q)^(d-n+s) q^(n-s) for psi = C q^-tau log(q+1)^-sigma, by its
// exponents. Throws kDomain for tabulated psi.
SeriesVerdict divergence_classifier(const ApproxFunction& psi, int d, int n, const Rational& s);

// q^((s-n-1)/(d-n+s) - eps).
ApproxFunction cantelli_function(int d, int n, const Rational& s, const Rational& eps);

struct CondensationReport {
  int T = 0;
  std::vector<double> log_terms;    // log of k^t psi(k^t)^(d-n+s) k^(t(n-s))
  std::vector<double> log_partial;  // log of the partial sums
  double growth = 0;                // fitted coefficient of t
  double log_power = 0;             // fitted coefficient of log t
  std::optional<SeriesVerdict> verdict;  // needs T >= 8
};

// Fits log c_t = a + g t + p log t on t in [T/2, T]; the condensed series
// grows when g > 0, or g = 0 and p >= -1.
CondensationReport condensation_check(const ApproxFunction& psi, int d, int n,
                                      const Rational& s, int64_t k, int T);

std::string verdict_name(SeriesVerdict v);

// n - (tau d - 1)/(tau + 1).
double dimension_formula(int n, int d, double tau);

struct DimensionOptions {
  int scale_lo = 3;   // finest box side is 2^-scale_hi
  int scale_hi = 12;
  int fit_lo = 5;     // exponents used for the slope
  int fit_hi = 10;
  int64_t q_cap = 2000000;
  int threads = 1;
};

struct DimensionEstimate {
  double tau = 0;
  std::vector<double> scales;
  std::vector<int64_t> q_block;  // Q_h for each scale
  std::vector<uint64_t> counts;
  double slope = 0;
  double formula_value = 0;
  std::vector<double> residuals;
};

// Box counts of W(tau) on the subspace. At side h the boxes are hit by
// q in (Q_h/2, Q_h] with Q_h = h^(-1/(1+tau)): a box with center c is hit
// when some p has |q c - p| < q^-tau + q h/2 and
// ||q (a0 + c A)|| < q^-tau + q n |A| h/2.
DimensionEstimate box_dimension(const AffineSubspaceSpec& spec, const Rational& tau,
                                const DimensionOptions& opts,
                                const Precision& prec = Precision{});

// The same count for W(tau) in R (first condition only).
DimensionEstimate box_dimension_line(const Rational& tau, const DimensionOptions& opts,
                                     const Precision& prec = Precision{});

std::string dimension_json(const DimensionEstimate& e);

}  // namespace diophlab

#endif  // DIOPHLAB_APPROX_HPP_
