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

#include "diophlab/subspace.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <sstream>

#include "diophlab/error.hpp"

namespace diophlab {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

AffineSubspaceSpec::AffineSubspaceSpec(int d, int n, SurdMatrix tilt, SurdVector shift)
    : d_(d), n_(n), tilt_(std::move(tilt)), shift_(std::move(shift)) {
  require(d >= 2, "ambient dimension d must be at least 2");
  require(n >= 1 && n < d, "subspace dimension must satisfy 1 <= n < d");
  require(static_cast<int>(tilt_.size()) == n, "tilt must have n rows");
  for (const auto& row : tilt_) {
    require(static_cast<int>(row.size()) == d - n, "tilt rows must have d - n entries");
  }
  require(static_cast<int>(shift_.size()) == d - n, "shift must have d - n entries");
}

AffineSubspaceSpec line_spec(const SurdSum& slope, const SurdSum& offset) {
  return AffineSubspaceSpec(2, 1, SurdMatrix{{slope}}, SurdVector{offset});
}

SurdMatrix AffineSubspaceSpec::augmented_matrix() const {
  SurdMatrix out;
  out.push_back(shift_);
  for (const auto& row : tilt_) out.push_back(row);
  return out;
}

SurdSum AffineSubspaceSpec::tilt_norm() const {
  SurdSum best;
  for (const auto& row : tilt_) {
    for (const auto& v : row) {
      SurdSum a = v.abs();
      if (exact_less(best, a)) best = a;
    }
  }
  return best;
}

bool AffineSubspaceSpec::tilt_is_zero() const {
  for (const auto& row : tilt_) {
    for (const auto& v : row) {
      if (!v.is_zero()) return false;
    }
  }
  return true;
}

std::string AffineSubspaceSpec::to_text() const {
  std::ostringstream os;
  os << "[subspace]\n";
  os << "d = " << d_ << "\n";
  os << "n = " << n_ << "\n";
  os << "tilt =";
  for (const auto& row : tilt_) {
    for (const auto& v : row) os << " " << to_exact_real(v).to_string();
  }
  os << "\nshift =";
  for (const auto& v : shift_) os << " " << to_exact_real(v).to_string();
  os << "\n";
  return os.str();
}

AffineSubspaceSpec AffineSubspaceSpec::from_text(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream is(text);
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorCode::kConfig, std::string("subspace file: ") + e.what());
  }
  auto get = [&tree](const std::string& key) {
    auto v = tree.get_optional<std::string>("subspace." + key);
    if (!v) fail(ErrorCode::kConfig, "subspace: missing field '" + key + "'");
    return *v;
  };
  int d = 0;
  int n = 0;
  try {
    d = std::stoi(get("d"));
    n = std::stoi(get("n"));
  } catch (const std::invalid_argument&) {
    fail(ErrorCode::kConfig, "subspace: d and n must be integers");
  }
  if (d < 2 || n < 1 || n >= d) fail(ErrorCode::kConfig, "subspace: need d >= 2 and 1 <= n < d");
  auto tilt_tokens = split_ws(get("tilt"));
  auto shift_tokens = split_ws(get("shift"));
  const int m = d - n;
  if (static_cast<int>(tilt_tokens.size()) != n * m) {
    fail(ErrorCode::kConfig, "subspace: tilt needs n*(d-n) = " + std::to_string(n * m) + " entries");
  }
  if (static_cast<int>(shift_tokens.size()) != m) {
    fail(ErrorCode::kConfig, "subspace: shift needs d-n = " + std::to_string(m) + " entries");
  }
  SurdMatrix tilt(n, SurdVector(m));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) tilt[i][j] = ExactReal::parse(tilt_tokens[i * m + j]).to_surd();
  }
  SurdVector shift(m);
  for (int j = 0; j < m; ++j) shift[j] = ExactReal::parse(shift_tokens[j]).to_surd();
  return AffineSubspaceSpec(d, n, std::move(tilt), std::move(shift));
}

AffineSubspaceSpec AffineSubspaceSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open subspace file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

void AffineSubspaceSpec::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write subspace file " + path);
  out << to_text();
}

int64_t HattedVector::height() const {
  int64_t h = q < 0 ? -q : q;
  for (int64_t v : p) h = std::max(h, v < 0 ? -v : v);
  return h;
}

Rational Ball::measure() const {
  Rational side = radius * 2;
  Rational m(1);
  for (size_t i = 0; i < center.size(); ++i) m *= side;
  return m;
}

SurdSum nearest_int_dist_exact(const SurdVector& x, const Precision& budget) {
  SurdSum best;
  for (const auto& v : x) {
    SurdSum dist = v.nearest_int_distance(budget);
    if (exact_less(best, dist, budget)) best = dist;
  }
  return best;
}

Interval nearest_int_dist(const SurdVector& x, long bits, const Precision& budget) {
  return nearest_int_dist_exact(x, budget).evaluate_to_width(bits, budget);
}

SurdVector hat_dot(const HattedVector& p_hat, const AffineSubspaceSpec& spec) {
  require(static_cast<int>(p_hat.p.size()) == spec.n(), "hat_dot: p must have n entries");
  SurdVector out(spec.codim());
  for (int v = 0; v < spec.codim(); ++v) {
    SurdSum acc = spec.shift()[v] * Rational(BigInt(p_hat.q));
    for (int i = 0; i < spec.n(); ++i) {
      if (p_hat.p[i] != 0) acc += spec.tilt()[i][v] * Rational(BigInt(p_hat.p[i]));
    }
    out[v] = std::move(acc);
  }
  return out;
}

SurdVector lift(const SurdVector& x, const AffineSubspaceSpec& spec) {
  require(static_cast<int>(x.size()) == spec.n(), "lift: x must have n entries");
  SurdVector out = x;
  for (int v = 0; v < spec.codim(); ++v) {
    SurdSum acc = spec.shift()[v];
    for (int i = 0; i < spec.n(); ++i) acc += x[i] * spec.tilt()[i][v];
    out.push_back(std::move(acc));
  }
  return out;
}

Real psi_capital(const BigInt& q, const ApproxFunction& psi, const AffineSubspaceSpec& spec) {
  require(q >= 1, "psi_capital: q must be positive");
  if (spec.tilt_is_zero()) {
    fail(ErrorCode::kDegenerateTilt, "psi_capital: tilt is zero, c = (2n|A|)^-1 undefined");
  }
  Real denom = Real(spec.tilt_norm()) * Real(Rational(BigInt(2 * spec.n()) * q));
  return psi.value(q) / denom;
}

AffineSubspaceSpec strip_translate(const AffineSubspaceSpec& spec, const StripIndex& v) {
  require(static_cast<int>(v.size()) == spec.n(), "strip index must have n entries");
  SurdVector shift = spec.shift();
  for (int c = 0; c < spec.codim(); ++c) {
    for (int i = 0; i < spec.n(); ++i) {
      if (v[i] != 0) shift[c] += spec.tilt()[i][c] * Rational(BigInt(v[i]));
    }
  }
  return AffineSubspaceSpec(spec.d(), spec.n(), spec.tilt(), std::move(shift));
}

}  // namespace diophlab
