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


#include "diophlab/closeness.hpp"

#include <string>

#include "diophlab/error.hpp"

namespace diophlab {

ClosenessKernel::ClosenessKernel(const AffineSubspaceSpec& spec, const Precision& budget)
    : spec_(spec), budget_(budget) {
  for (int v = 0; v < spec.codim(); ++v) shift_.push_back(mod_one(spec.shift()[v]));
  for (int i = 0; i < spec.n(); ++i) {
    std::vector<ModOne> row;
    for (int v = 0; v < spec.codim(); ++v) row.push_back(mod_one(spec.tilt()[i][v]));
    tilt_.push_back(std::move(row));
  }
}

ModOne ClosenessKernel::column(int64_t q, const std::vector<int64_t>& p, int v) const {
  ModOne m = scale(shift_[v], q);
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] != 0) m = add(m, scale(tilt_[i][v], p[i]));
  }
  return m;
}

SurdSum ClosenessKernel::closeness(const HattedVector& p_hat) const {
  return nearest_int_dist_exact(hat_dot(p_hat, spec_), budget_);
}

bool ClosenessKernel::test_exact(const HattedVector& p_hat, const Real& delta) const {
  SurdVector cols = hat_dot(p_hat, spec_);
  for (const auto& c : cols) {
    SurdSum dist = c.nearest_int_distance(budget_);
    try {
      if (!certified_less(Real(dist), delta, budget_)) return false;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kPrecisionExhausted) throw;
      std::string ps = std::to_string(p_hat.q);
      for (int64_t v : p_hat.p) ps += "," + std::to_string(v);
      fail(ErrorCode::kPrecisionExhausted, "boundary tie at p^ = (" + ps + ")");
    }
  }
  return true;
}

bool ClosenessKernel::test(const HattedVector& p_hat, const FixedThreshold& fixed,
                           const Real& delta) const {
  bool unknown = false;
  for (int v = 0; v < spec_.codim(); ++v) {
    Tri r = less(distance(column(p_hat.q, p_hat.p, v)), fixed);
    if (r == Tri::kNo) return false;
    if (r == Tri::kUnknown) unknown = true;
  }
  if (!unknown) return true;
  return test_exact(p_hat, delta);
}

}  // namespace diophlab
