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


// Membership tests ||p^ A~|| < delta for hatted vectors p^ = (q, p), where
// the norm is the largest distance to an integer over the d - n columns.
// The fixed-point kernel decides almost every case; ties and near-ties are
// settled exactly.

#ifndef DIOPHLAB_CLOSENESS_HPP_
#define DIOPHLAB_CLOSENESS_HPP_

#include <cstdint>
#include <vector>

#include "diophlab/fixed.hpp"
#include "diophlab/subspace.hpp"

namespace diophlab {

class ClosenessKernel {
 public:
  ClosenessKernel(const AffineSubspaceSpec& spec, const Precision& budget = Precision{});

  const AffineSubspaceSpec& spec() const { return spec_; }
  const ModOne& shift_fixed(int v) const { return shift_[v]; }
  const ModOne& tilt_fixed(int i, int v) const { return tilt_[i][v]; }

  // Fixed-point enclosure of column v of p^ A~.
  ModOne column(int64_t q, const std::vector<int64_t>& p, int v) const;

  // ||p^ A~|| < delta, certified.
  bool test(const HattedVector& p_hat, const FixedThreshold& fixed, const Real& delta) const;
  // Exact decision only.
  bool test_exact(const HattedVector& p_hat, const Real& delta) const;
  // Exact value of ||p^ A~||.
  SurdSum closeness(const HattedVector& p_hat) const;

 private:
  AffineSubspaceSpec spec_;
  Precision budget_;
  std::vector<ModOne> shift_;
  std::vector<std::vector<ModOne>> tilt_;
};

}  // namespace diophlab

#endif  // DIOPHLAB_CLOSENESS_HPP_
