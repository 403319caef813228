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


#include "diophlab/experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "diophlab/approx.hpp"
#include "diophlab/lattice.hpp"
#include "diophlab/madsum.hpp"
#include "diophlab/parallel.hpp"
#include "diophlab/rng.hpp"
#include "diophlab/selberg.hpp"
#include "diophlab/ubiquity.hpp"
#include "json.hpp"

namespace diophlab {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kFloatFormat = "%.17g";
constexpr const char* kLedgerFile = "ledger.jsonl";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_ld(long double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.21Lg", v);
  return buf;
}

std::string join_ints(const std::vector<int64_t>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  fail(ErrorCode::kConfig, key + ": " + what);
}

// ---------------------------------------------------------------------------
// Literals

std::vector<std::string> tokenize(const std::string& value) {
  std::string spaced;
  for (char ch : value) {
    if (ch == ';') {
      spaced += " ; ";
    } else if (ch == ',' || ch == '\t' || ch == '\r' || ch == '\n') {
      spaced += ' ';
    } else {
      spaced += ch;
    }
  }
  std::istringstream is(spaced);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

std::optional<Rational> parse_decimal(const std::string& tok) {
  static const std::regex re(R"(^([+-]?)(\d*)\.(\d+)$|^([+-]?)(\d+)\.$)");
  std::smatch m;
  if (!std::regex_match(tok, m, re)) return std::nullopt;
  std::string sign = m[1].matched ? m[1].str() : m[4].str();
  std::string whole = m[2].matched ? m[2].str() : m[5].str();
  std::string frac = m[3].matched ? m[3].str() : "";
  if (whole.empty()) whole = "0";
  BigInt num(whole + frac);
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  Rational r(num, den);
  r.canonicalize();
  return sign == "-" ? -r : r;
}

int64_t parse_int(const std::string& key, const std::string& tok) {
  static const std::regex plain(R"(^[+-]?\d+$)");
  static const std::regex power(R"(^(\d+)\^(\d+)$)");
  static const std::regex sci(R"(^(\d+)[eE](\d+)$)");
  std::smatch m;
  BigInt v;
  if (std::regex_match(tok, plain)) {
    v = BigInt(tok[0] == '+' ? tok.substr(1) : tok);
  } else if (std::regex_match(tok, m, power)) {
    mpz_pow_ui(v.get_mpz_t(), BigInt(m[1].str()).get_mpz_t(), std::stoul(m[2].str()));
  } else if (std::regex_match(tok, m, sci)) {
    BigInt ten;
    mpz_ui_pow_ui(ten.get_mpz_t(), 10, std::stoul(m[2].str()));
    v = BigInt(m[1].str()) * ten;
  } else {
    config_error(key, "expected an integer, got '" + tok + "'");
  }
  if (mpz_fits_slong_p(v.get_mpz_t()) == 0) config_error(key, "integer out of range: " + tok);
  return v.get_si();
}

ExactReal parse_exact(const std::string& key, const std::string& tok) {
  if (auto dec = parse_decimal(tok)) return ExactReal(*dec);
  try {
    return ExactReal::parse(tok);
  } catch (const Error& e) {
    config_error(key, "bad numeric literal '" + tok + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Config

class Config {
 public:
  explicit Config(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream is(text);
    try {
      boost::property_tree::ini_parser::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      fail(ErrorCode::kConfig, std::string("config: ") + e.what());
    }
    for (const auto& [section, body] : tree) {
      if (body.empty()) {
        values_[section] = normalize(body.data());
        continue;
      }
      for (const auto& [key, leaf] : body) values_[section + "." + key] = normalize(leaf.data());
    }
  }

  const std::map<std::string, std::string>& values() const { return values_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& str(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) config_error(key, "missing required field");
    return it->second;
  }
  std::string str_or(const std::string& key, const std::string& def) const {
    return has(key) ? str(key) : def;
  }

  std::vector<std::string> tokens(const std::string& key) const {
    auto t = tokenize(str(key));
    if (t.empty()) config_error(key, "empty value");
    return t;
  }
  std::string single(const std::string& key) const {
    auto t = tokens(key);
    if (t.size() != 1) config_error(key, "expected a single value");
    return t[0];
  }

  int64_t integer(const std::string& key) const { return parse_int(key, single(key)); }
  int64_t integer_or(const std::string& key, int64_t def) const {
    return has(key) ? integer(key) : def;
  }
  std::vector<int64_t> integers(const std::string& key) const {
    std::vector<int64_t> out;
    for (const auto& t : tokens(key)) out.push_back(parse_int(key, t));
    return out;
  }

  Rational rational(const std::string& key) const { return as_rational(key, single(key)); }
  Rational rational_or(const std::string& key, const Rational& def) const {
    return has(key) ? rational(key) : def;
  }
  std::vector<Rational> rationals(const std::string& key) const {
    std::vector<Rational> out;
    for (const auto& t : tokens(key)) out.push_back(as_rational(key, t));
    return out;
  }

  double number(const std::string& key) const { return parse_exact(key, single(key)).approx(); }
  double number_or(const std::string& key, double def) const {
    return has(key) ? number(key) : def;
  }

  SurdVector reals(const std::string& key) const {
    SurdVector out;
    for (const auto& t : tokens(key)) out.push_back(parse_exact(key, t).to_surd());
    return out;
  }
  // Vectors separated by ';'.
  std::vector<SurdVector> vectors(const std::string& key) const {
    std::vector<SurdVector> out(1);
    for (const auto& t : tokens(key)) {
      if (t == ";") {
        out.emplace_back();
      } else {
        out.back().push_back(parse_exact(key, t).to_surd());
      }
    }
    for (const auto& v : out) {
      if (v.empty()) config_error(key, "empty vector");
    }
    return out;
  }

  std::string canonical() const {
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;
    for (const auto& [k, v] : values_) {
      auto dot = k.find('.');
      sections[k.substr(0, dot)].emplace_back(k.substr(dot + 1), v);
    }
    std::string out;
    for (const auto& [name, entries] : sections) {
      out += "[" + name + "]\n";
      for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    }
    return out;
  }

 private:
  static std::string normalize(const std::string& raw) {
    std::string out;
    for (const auto& t : tokenize(raw)) {
      if (!out.empty()) out += ' ';
      out += t;
    }
    return out;
  }
  static Rational as_rational(const std::string& key, const std::string& tok) {
    ExactReal v = parse_exact(key, tok);
    if (!v.is_rational()) config_error(key, "expected a rational, got '" + tok + "'");
    return v.as_rational();
  }

  std::map<std::string, std::string> values_;
};

// ---------------------------------------------------------------------------
// Schemas

struct Field {
  std::string key;
  bool required;
};

const std::vector<Field> kSubspaceFields = {
    {"subspace.d", true}, {"subspace.n", true}, {"subspace.tilt", true}, {"subspace.shift", true}};
const std::vector<Field> kPsiFields = {{"psi.kind", false},
                                       {"psi.c", false},
                                       {"psi.tau", false},
                                       {"psi.sigma", false},
                                       {"psi.values", false}};
const std::vector<Field> kMatrixFields = {
    {"matrix.rows", true}, {"matrix.cols", true}, {"matrix.entries", true}};

std::vector<Field> optional_fields(std::vector<Field> fields) {
  for (auto& f : fields) f.required = false;
  return fields;
}

std::vector<Field> concat(std::initializer_list<std::vector<Field>> parts) {
  std::vector<Field> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

const std::map<std::string, std::vector<Field>>& schemas() {
  static const std::map<std::string, std::vector<Field>> s = {
      {"mad-estimate",
       concat({kMatrixFields, {{"mad.j_max", true}, {"mad.omega_max", false}}})},
      {"mad-sum", concat({kMatrixFields,
                          {{"mad.omega", true},
                           {"mad.l", false},
                           {"mad.fit_grid", true},
                           {"mad.check_grid", false}}})},
      {"selberg-check",
       {{"selberg.deltas", true},
        {"selberg.degrees", true},
        {"selberg.points", false},
        {"selberg.max_bits", false}}},
      {"count-verify", concat({kSubspaceFields, kPsiFields,
                               {{"counting.k", true},
                                {"counting.t_values", true},
                                {"counting.ball_centers", true},
                                {"counting.ball_radii", true},
                                {"counting.c", false},
                                {"counting.omega", false},
                                {"counting.fit_grid", false}}})},
      {"minkowski-solve", concat({optional_fields(kSubspaceFields), kPsiFields,
                                  {{"solve.mode", true},
                                   {"solve.k", false},
                                   {"solve.beta", false},
                                   {"solve.bounds", false},
                                   {"solve.N", false},
                                   {"solve.samples", false},
                                   {"solve.systems", false},
                                   {"solve.max_k", false},
                                   {"solve.max_radius", false},
                                   {"solve.search_budget", false}}})},
      {"cover-check", concat({kSubspaceFields, kPsiFields,
                              {{"cover.k", true},
                               {"cover.t", true},
                               {"cover.ball_center", true},
                               {"cover.ball_radius", true},
                               {"cover.samples", false},
                               {"cover.rho_scale", false},
                               {"cover.max_half_width", false}}})},
      {"ubiquity-verify", concat({kSubspaceFields, kPsiFields,
                                  {{"ubiquity.k", true},
                                   {"ubiquity.t_values", true},
                                   {"ubiquity.ball_center", true},
                                   {"ubiquity.ball_radius", true},
                                   {"ubiquity.samples", false},
                                   {"ubiquity.resonant_q_max", false},
                                   {"ubiquity.max_half_width", false},
                                   {"ubiquity.stability", false}}})},
      {"approx-measure", concat({kSubspaceFields, kPsiFields,
                                 {{"measure.grid", true},
                                  {"measure.samples", true},
                                  {"measure.q_min", false},
                                  {"measure.target", false}}})},
      {"dimension", concat({optional_fields(kSubspaceFields),
                            {{"dimension.mode", true},
                             {"dimension.tau", true},
                             {"dimension.scale_lo", true},
                             {"dimension.scale_hi", true},
                             {"dimension.fit_lo", true},
                             {"dimension.fit_hi", true},
                             {"dimension.tolerance", false},
                             {"dimension.q_cap", false}}})},
      {"classify-series",
       {{"series.d", true},
        {"series.n", true},
        {"series.s", true},
        {"series.k", false},
        {"series.T", false},
        {"series.instances", false},
        {"series.random", false},
        {"series.eps", false}}},
  };
  return s;
}

const std::vector<Field>& schema_for(const std::string& subcommand) {
  auto it = schemas().find(subcommand);
  if (it == schemas().end()) fail(ErrorCode::kConfig, "unknown subcommand '" + subcommand + "'");
  return it->second;
}

void validate(const std::string& subcommand, const Config& cfg) {
  const auto& fields = schema_for(subcommand);
  std::set<std::string> known;
  std::vector<std::string> missing;
  for (const auto& f : fields) {
    known.insert(f.key);
    if (f.required && !cfg.has(f.key)) missing.push_back(f.key);
  }
  std::vector<std::string> unknown;
  for (const auto& [k, v] : cfg.values()) {
    if (!known.count(k)) unknown.push_back(k);
  }
  if (missing.empty() && unknown.empty()) return;
  std::string msg = subcommand + " config invalid";
  if (!missing.empty()) {
    msg += "; missing required fields:";
    for (const auto& k : missing) msg += " " + k;
  }
  if (!unknown.empty()) {
    msg += "; unknown fields:";
    for (const auto& k : unknown) msg += " " + k;
  }
  fail(ErrorCode::kConfig, msg);
}

// ---------------------------------------------------------------------------
// Domain objects from a config

void require_fields(const Config& cfg, const std::vector<std::string>& keys,
                    const std::string& why) {
  std::string missing;
  for (const auto& k : keys) {
    if (!cfg.has(k)) missing += " " + k;
  }
  if (!missing.empty()) fail(ErrorCode::kConfig, why + "; missing required fields:" + missing);
}

AffineSubspaceSpec parse_subspace(const Config& cfg) {
  const int64_t d = cfg.integer("subspace.d");
  const int64_t n = cfg.integer("subspace.n");
  if (d < 2 || n < 1 || n >= d || d > 8) config_error("subspace.d", "need 1 <= n < d <= 8");
  const int m = static_cast<int>(d - n);
  SurdVector tilt = cfg.reals("subspace.tilt");
  SurdVector shift = cfg.reals("subspace.shift");
  if (static_cast<int64_t>(tilt.size()) != n * m) {
    config_error("subspace.tilt", "needs n*(d-n) = " + std::to_string(n * m) + " entries");
  }
  if (static_cast<int>(shift.size()) != m) {
    config_error("subspace.shift", "needs d-n = " + std::to_string(m) + " entries");
  }
  SurdMatrix a(n, SurdVector(m));
  for (int64_t i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) a[i][j] = tilt[i * m + j];
  }
  return AffineSubspaceSpec(static_cast<int>(d), static_cast<int>(n), std::move(a),
                            std::move(shift));
}

ApproxFunction parse_psi(const Config& cfg) {
  const std::string kind = cfg.str_or("psi.kind", "power_log");
  if (kind == "table") {
    if (!cfg.has("psi.values")) config_error("psi.values", "missing required field for kind = table");
    auto values = cfg.rationals("psi.values");
    try {
      return ApproxFunction::table(std::move(values));
    } catch (const Error& e) {
      config_error("psi.values", e.what());
    }
  }
  if (kind != "power_log") config_error("psi.kind", "expected power_log or table");
  if (!cfg.has("psi.tau")) config_error("psi.tau", "missing required field for kind = power_log");
  try {
    return ApproxFunction::power_log(cfg.rational_or("psi.c", Rational(1)), cfg.rational("psi.tau"),
                                     cfg.rational_or("psi.sigma", Rational(0)));
  } catch (const Error& e) {
    fail(ErrorCode::kConfig, std::string("psi: ") + e.what());
  }
}

SurdMatrix parse_matrix(const Config& cfg) {
  const int64_t rows = cfg.integer("matrix.rows");
  const int64_t cols = cfg.integer("matrix.cols");
  if (rows < 1 || cols < 1 || rows > 8 || cols > 8) config_error("matrix.rows", "sizes must lie in [1, 8]");
  SurdVector e = cfg.reals("matrix.entries");
  if (static_cast<int64_t>(e.size()) != rows * cols) {
    config_error("matrix.entries", "needs rows*cols = " + std::to_string(rows * cols) + " entries");
  }
  SurdMatrix a(rows, SurdVector(cols));
  for (int64_t i = 0; i < rows; ++i) {
    for (int64_t j = 0; j < cols; ++j) a[i][j] = e[i * cols + j];
  }
  return a;
}

Ball parse_ball(const Config& cfg, const std::string& center_key, const std::string& radius_key,
                int n) {
  Ball b;
  b.center = cfg.reals(center_key);
  if (static_cast<int>(b.center.size()) != n) {
    config_error(center_key, "needs n = " + std::to_string(n) + " entries");
  }
  b.radius = cfg.rational(radius_key);
  if (b.radius <= 0) config_error(radius_key, "must be positive");
  return b;
}

void check_positive(const std::string& key, int64_t v) {
  if (v < 1) config_error(key, "must be positive");
}

// ---------------------------------------------------------------------------
// Subcommands

struct Context {
  const Config& cfg;
  uint64_t seed;
  int threads;
  Precision prec;
  uint64_t budget;
};

struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;
  bool pass = true;
  std::string summary;
};

json summary_base(const std::string& subcommand) {
  return json{{"subcommand", subcommand}, {"csv_float_format", kFloatFormat}};
}

void finish(Outputs& out, json summary) {
  summary["pass"] = out.pass;
  out.files.emplace_back("summary.json", summary.dump(2) + "\n");
}

Outputs run_mad_estimate(const Context& c) {
  SurdMatrix a = parse_matrix(c.cfg);
  const int64_t j_max = c.cfg.integer("mad.j_max");
  check_positive("mad.j_max", j_max);
  MadDiagnostics m = estimate_exponent(a, j_max, c.threads, c.prec);
  std::string csv = "norm,j,p_lo,p_hi\n";
  for (const auto& r : m.records) {
    csv += std::to_string(r.norm) + "," + join_ints(r.j) + "," + fmt_ld(r.lo) + "," +
           fmt_ld(r.hi) + "\n";
  }
  Outputs out;
  out.files.emplace_back("envelope.csv", csv);
  json s = summary_base("mad-estimate");
  s["j_max"] = m.j_max;
  s["evaluated"] = m.evaluated;
  s["records"] = m.records.size();
  s["omega_infinite"] = m.omega_infinite;
  s["zero_witness"] = m.zero_witness;
  s["fitted_omega"] = m.fitted_omega;
  s["omega_stderr"] = m.omega_stderr;
  s["infimum_witness"] = m.infimum_witness;
  s["infimum_value"] = m.infimum_value;
  if (c.cfg.has("mad.omega_max")) {
    const double cap = c.cfg.number("mad.omega_max");
    out.pass = !m.omega_infinite && m.fitted_omega < cap;
    s["omega_max"] = cap;
  }
  out.summary = m.omega_infinite ? "omega infinite (P vanishes)"
                                 : "fitted omega " + fmt(m.fitted_omega);
  finish(out, s);
  return out;
}

Outputs run_mad_sum(const Context& c) {
  SurdMatrix a = parse_matrix(c.cfg);
  const double omega = c.cfg.number("mad.omega");
  const int64_t l = c.cfg.integer_or("mad.l", static_cast<int64_t>(a[0].size()));
  if (l < 0) config_error("mad.l", "must be non-negative");
  auto fit_grid = c.cfg.integers("mad.fit_grid");
  auto check_grid = c.cfg.has("mad.check_grid") ? c.cfg.integers("mad.check_grid") : fit_grid;
  if (!std::is_sorted(fit_grid.begin(), fit_grid.end()) || fit_grid.front() < 2) {
    config_error("mad.fit_grid", "must be ascending with J >= 2");
  }
  if (!std::is_sorted(check_grid.begin(), check_grid.end()) || check_grid.front() < 2) {
    config_error("mad.check_grid", "must be ascending with J >= 2");
  }
  SumConstantFit fit = fit_sum_constant(a, omega, static_cast<int>(l), fit_grid, c.threads);
  auto rows = check_sum_bound(a, omega, static_cast<int>(l), fit.c, check_grid, c.threads);
  std::string csv = "phase,J,sum_lo,sum_hi,bound,slack,ok\n";
  auto emit = [&csv](const char* phase, const SumBoundRow& r) {
    csv += std::string(phase) + "," + std::to_string(r.J) + "," + fmt(r.sum.lo_down()) + "," +
           fmt(r.sum.hi_up()) + "," + fmt(r.bound) + "," + fmt(r.slack) + "," +
           (r.ok ? "1" : "0") + "\n";
  };
  for (const auto& r : fit.rows) emit("fit", r);
  Outputs out;
  size_t failures = 0;
  for (const auto& r : rows) {
    emit("check", r);
    if (!r.ok) ++failures;
  }
  out.pass = failures == 0;
  out.files.emplace_back("sums.csv", csv);
  json s = summary_base("mad-sum");
  s["omega"] = omega;
  s["l"] = l;
  s["c"] = fit.c;
  s["fit_grid"] = fit_grid;
  s["check_grid"] = check_grid;
  s["check_failures"] = failures;
  out.summary = "C = " + fmt(fit.c) + ", " + std::to_string(failures) + " check failures";
  finish(out, s);
  return out;
}

Outputs run_selberg(const Context& c) {
  auto deltas = c.cfg.rationals("selberg.deltas");
  auto degrees = c.cfg.integers("selberg.degrees");
  const int64_t points = c.cfg.integer_or("selberg.points", 10000);
  const int64_t max_bits = c.cfg.integer_or("selberg.max_bits", 1024);
  for (const auto& d : deltas) {
    if (d <= 0 || d >= Rational(1, 2)) config_error("selberg.deltas", "each delta must lie in (0, 1/2)");
  }
  for (auto J : degrees) {
    if (J < 1 || J > 4096) config_error("selberg.degrees", "each J must lie in [1, 4096]");
  }
  check_positive("selberg.points", points);
  struct Cell {
    std::string csv;
    json row;
    bool pass = false;
  };
  const size_t cells = deltas.size() * degrees.size();
  auto results = run_chunks<Cell>(make_chunks(0, cells, 1), c.threads, [&](const ChunkRange& r) {
    const Rational& delta = deltas[r.begin / degrees.size()];
    const int J = static_cast<int>(degrees[r.begin % degrees.size()]);
    const long prec = std::max<long>(128, c.prec.bits);
    auto minus = TrigPolynomial::construct(delta, J, SelbergSign::kMinorant, prec);
    auto plus = TrigPolynomial::construct(delta, J, SelbergSign::kMajorant, prec);
    Cell cell;
    for (const TrigPolynomial* p : {&minus, &plus}) {
      const char* sign = p->sign() == SelbergSign::kMajorant ? "plus" : "minus";
      for (int j = 0; j <= J; ++j) {
        const Interval& b = p->coefficient(j);
        cell.csv += delta.get_str() + "," + std::to_string(J) + "," + sign + "," +
                    std::to_string(j) + "," + fmt(b.lo_down()) + "," + fmt(b.hi_up()) + "," +
                    fmt(p->coefficient_bound(j).hi_up()) + "\n";
      }
    }
    const Rational inv(1, J + 1);
    const bool b0_exact = minus.b0() == 2 * delta - inv && plus.b0() == 2 * delta + inv;
    const bool contract = minus.coefficient_contract_holds() && plus.coefficient_contract_holds();
    auto rep = check_majorization(minus, plus, points, c.seed, max_bits);
    cell.pass = b0_exact && contract && rep.failures == 0 && rep.undecided == 0;
    cell.row = json{{"delta", delta.get_str()},
                    {"J", J},
                    {"b0_minus", minus.b0().get_str()},
                    {"b0_plus", plus.b0().get_str()},
                    {"b0_exact", b0_exact},
                    {"coefficient_contract", contract},
                    {"points", rep.points},
                    {"tested", rep.tested},
                    {"failures", rep.failures},
                    {"undecided", rep.undecided},
                    {"pass", cell.pass}};
    return cell;
  });
  Outputs out;
  std::string csv = "delta,J,sign,j,b_lo,b_hi,bound\n";
  json rows = json::array();
  size_t passed = 0;
  for (const auto& cell : results) {
    csv += cell.csv;
    rows.push_back(cell.row);
    if (cell.pass) ++passed;
  }
  out.pass = passed == results.size();
  out.files.emplace_back("coefficients.csv", csv);
  json s = summary_base("selberg-check");
  s["seed"] = c.seed;
  s["cases"] = rows;
  out.summary = std::to_string(passed) + "/" + std::to_string(results.size()) + " cases pass";
  finish(out, s);
  return out;
}

Outputs run_count_verify(const Context& c) {
  AffineSubspaceSpec spec = parse_subspace(c.cfg);
  ApproxFunction psi = parse_psi(c.cfg);
  const int d = spec.d();
  const int n = spec.n();
  const int64_t k = c.cfg.integer("counting.k");
  if (k < 2) config_error("counting.k", "must be at least 2");
  std::vector<int> ts;
  for (auto t : c.cfg.integers("counting.t_values")) {
    if (t < 1 || t > 64) config_error("counting.t_values", "levels must lie in [1, 64]");
    ts.push_back(static_cast<int>(t));
  }
  auto centers = c.cfg.vectors("counting.ball_centers");
  auto radii = c.cfg.rationals("counting.ball_radii");
  if (centers.size() != radii.size()) {
    config_error("counting.ball_radii", "needs one radius per ball center");
  }
  std::vector<Ball> balls;
  for (size_t i = 0; i < centers.size(); ++i) {
    if (static_cast<int>(centers[i].size()) != n) {
      config_error("counting.ball_centers", "each center needs n entries");
    }
    if (radii[i] <= 0) config_error("counting.ball_radii", "radii must be positive");
    balls.push_back(Ball{centers[i], radii[i]});
  }
  const double omega = c.cfg.number_or("counting.omega", 1.05 * (d - n));
  json s = summary_base("count-verify");
  double cst = 0;
  const std::string c_text = c.cfg.str_or("counting.c", "auto");
  if (c_text == "auto") {
    std::vector<int64_t> grid = {8, 16, 32, 64, 128, 256};
    if (c.cfg.has("counting.fit_grid")) grid = c.cfg.integers("counting.fit_grid");
    SumConstantFit fit = fit_sum_constant(spec.tilt(), omega, n, grid, c.threads);
    cst = lemma3_constant(fit.c, d, n);
    s["c_sum"] = fit.c;
    s["c_source"] = "fit";
  } else {
    cst = c.cfg.number("counting.c");
    s["c_source"] = "config";
  }
  CountingReport rep =
      verify_counting_sweep(spec, psi, k, ts, balls, cst, omega, c.threads, c.budget);
  Outputs out;
  out.files.emplace_back("counting.csv", counting_csv(rep));
  json single_failures = json::array();
  size_t aggregate_failures = 0;
  for (const auto& r : rep.rows) {
    if (r.pass) continue;
    if (r.kind == "single") {
      single_failures.push_back({{"ball", r.ball}, {"t", r.t}, {"q", r.q}, {"margin", r.margin}});
    } else {
      ++aggregate_failures;
    }
  }
  out.pass = std::all_of(rep.t0.begin(), rep.t0.end(), [](int t) { return t >= 0; });
  s["c"] = cst;
  s["omega"] = omega;
  s["t0"] = rep.t0;
  s["aggregate_failures"] = aggregate_failures;
  s["single_failures"] = single_failures;
  out.summary = "t0 =";
  for (int t : rep.t0) out.summary += " " + std::to_string(t);
  out.summary += ", " + std::to_string(single_failures.size()) + " flagged single-point rows";
  finish(out, s);
  return out;
}

Outputs run_minkowski(const Context& c) {
  const std::string mode = c.cfg.str("solve.mode");
  const uint64_t search = static_cast<uint64_t>(c.cfg.integer_or("solve.search_budget", 10000000));
  Outputs out;
  json s = summary_base("minkowski-solve");
  s["mode"] = mode;
  if (mode == "system") {
    require_fields(c.cfg, {"solve.k", "solve.beta", "solve.bounds"}, "mode = system");
    const int64_t k = c.cfg.integer("solve.k");
    if (k < 1 || k > 8) config_error("solve.k", "must lie in [1, 8]");
    SurdVector beta = c.cfg.reals("solve.beta");
    SurdVector bounds = c.cfg.reals("solve.bounds");
    if (static_cast<int64_t>(beta.size()) != k * k) config_error("solve.beta", "needs k*k entries");
    if (static_cast<int64_t>(bounds.size()) != k) config_error("solve.bounds", "needs k entries");
    LinearFormsSystem sys;
    sys.beta.assign(k, std::vector<Real>(k));
    for (int64_t i = 0; i < k; ++i) {
      for (int64_t j = 0; j < k; ++j) sys.beta[i][j] = Real(beta[i * k + j]);
      sys.bounds.push_back(Real(bounds[i]));
    }
    DetCheck det = check_determinant(sys);
    SolveResult r = solve_linear_forms(sys, search, {}, c.prec);
    const bool ok = sys.satisfied_by(r.x, c.prec);
    out.pass = ok;
    json sol = {{"x", r.x},
                {"candidates", r.candidates},
                {"exhaustive", r.exhaustive},
                {"det_status", det_status_name(det.status)},
                {"det", det.det.mid()},
                {"bound_product", det.product.mid()},
                {"certified", ok}};
    out.files.emplace_back("solution.json", sol.dump(2) + "\n");
    out.summary = "x = (" + join_ints(r.x) + ")";
  } else if (mode == "containment") {
    require_fields(c.cfg, {"subspace.d", "subspace.n", "subspace.tilt", "subspace.shift", "solve.N",
                           "solve.samples"},
                   "mode = containment");
    AffineSubspaceSpec spec = parse_subspace(c.cfg);
    ApproxFunction psi = parse_psi(c.cfg);
    const int64_t N = c.cfg.integer("solve.N");
    const int64_t samples = c.cfg.integer("solve.samples");
    check_positive("solve.N", N);
    check_positive("solve.samples", samples);
    struct Row {
      std::string line;
      CoveringWitness w;
    };
    auto rows = run_chunks<std::vector<Row>>(
        make_chunks(0, samples, 16), c.threads, [&](const ChunkRange& r) {
          std::vector<Row> v;
          for (uint64_t i = r.begin; i < r.end; ++i) {
            SurdVector x = sample_point(c.seed, i, samples, spec.n()).to_surd();
            CoveringWitness w = covering_witness(x, N, psi, spec, search, c.prec);
            v.push_back({witness_json(x, w), w});
          }
          return v;
        });
    std::string lines;
    uint64_t valid = 0, closeness = 0, radius = 0, height = 0, statement = 0;
    std::map<std::string, uint64_t> pre;
    for (const auto& chunk : rows) {
      for (const auto& row : chunk) {
        lines += row.line + "\n";
        valid += row.w.valid();
        closeness += row.w.closeness_ok;
        radius += row.w.radius_ok;
        height += row.w.height_ok;
        statement += row.w.statement_radius_ok;
        ++pre[det_status_name(row.w.precondition)];
      }
    }
    out.pass = valid == static_cast<uint64_t>(samples);
    out.files.emplace_back("witnesses.jsonl", lines);
    s["N"] = N;
    s["samples"] = samples;
    s["seed"] = c.seed;
    s["valid"] = valid;
    s["closeness_ok"] = closeness;
    s["radius_ok"] = radius;
    s["height_ok"] = height;
    s["statement_radius_ok"] = statement;
    s["precondition"] = pre;
    out.summary = std::to_string(valid) + "/" + std::to_string(samples) + " witnesses valid";
  } else if (mode == "random") {
    require_fields(c.cfg, {"solve.systems"}, "mode = random");
    const int64_t systems = c.cfg.integer("solve.systems");
    const int64_t max_k = c.cfg.integer_or("solve.max_k", 4);
    const int64_t max_radius = c.cfg.integer_or("solve.max_radius", 6);
    check_positive("solve.systems", systems);
    if (max_k < 1 || max_k > 6) config_error("solve.max_k", "must lie in [1, 6]");
    check_positive("solve.max_radius", max_radius);
    struct Row {
      std::string line;
      bool matched = false;
    };
    auto rows = run_chunks<std::vector<Row>>(
        make_chunks(0, systems, 8), c.threads, [&](const ChunkRange& r) {
          std::vector<Row> v;
          for (uint64_t i = r.begin; i < r.end; ++i) {
            const int k = 1 + static_cast<int>(i % max_k);
            LinearFormsSystem sys = random_certified_system(c.seed, i, k, max_radius);
            SolveResult sol = solve_linear_forms(sys, search, {}, c.prec);
            const int64_t radius = solution_box_radius(sys);
            auto oracle = box_solutions(sys, radius, c.prec);
            const bool in_oracle = std::find(oracle.begin(), oracle.end(), sol.x) != oracle.end();
            const bool matched = in_oracle && sys.satisfied_by(sol.x, c.prec);
            v.push_back({std::to_string(i) + "," + std::to_string(k) + "," +
                             det_status_name(check_determinant(sys).status) + "," +
                             join_ints(sol.x) + "," + std::to_string(sol.candidates) + "," +
                             (sol.exhaustive ? "1" : "0") + "," + std::to_string(radius) + "," +
                             std::to_string(oracle.size()) + "," + (matched ? "1" : "0") + "\n",
                         matched});
          }
          return v;
        });
    std::string csv = "index,k,det_status,x,candidates,exhaustive,box_radius,oracle_solutions,matched\n";
    uint64_t matched = 0;
    for (const auto& chunk : rows) {
      for (const auto& row : chunk) {
        csv += row.line;
        matched += row.matched;
      }
    }
    out.pass = matched == static_cast<uint64_t>(systems);
    out.files.emplace_back("systems.csv", csv);
    s["systems"] = systems;
    s["matched"] = matched;
    s["seed"] = c.seed;
    out.summary = std::to_string(matched) + "/" + std::to_string(systems) + " systems matched";
  } else {
    config_error("solve.mode", "expected system, containment or random");
  }
  finish(out, s);
  return out;
}

Outputs run_cover_check(const Context& c) {
  AffineSubspaceSpec spec = parse_subspace(c.cfg);
  ApproxFunction psi = parse_psi(c.cfg);
  const int64_t k = c.cfg.integer("cover.k");
  const int64_t t = c.cfg.integer("cover.t");
  if (k < 2) config_error("cover.k", "must be at least 2");
  if (t < 1) config_error("cover.t", "must be positive");
  Ball ball = parse_ball(c.cfg, "cover.ball_center", "cover.ball_radius", spec.n());
  CoverOptions opts;
  opts.samples = static_cast<uint64_t>(c.cfg.integer_or("cover.samples", 10000));
  opts.seed = c.seed;
  opts.threads = c.threads;
  opts.rho_scale = c.cfg.rational_or("cover.rho_scale", Rational(1));
  const double max_hw = c.cfg.number_or("cover.max_half_width", 0.02);
  CoverReport r = covering_fraction(ball, k, static_cast<int>(t), psi, spec, opts, c.prec);
  Outputs out;
  out.pass = r.fraction > 0 && r.half_width < max_hw;
  out.files.emplace_back("cover.json", cover_json(r));
  json s = summary_base("cover-check");
  s["fraction"] = r.fraction;
  s["half_width"] = r.half_width;
  s["max_half_width"] = max_hw;
  out.summary = "fraction " + fmt(r.fraction) + " +- " + fmt(r.half_width);
  finish(out, s);
  return out;
}

Outputs run_ubiquity(const Context& c) {
  AffineSubspaceSpec spec = parse_subspace(c.cfg);
  ApproxFunction psi = parse_psi(c.cfg);
  const int64_t k = c.cfg.integer("ubiquity.k");
  if (k < 2) config_error("ubiquity.k", "must be at least 2");
  std::vector<int> ts;
  for (auto t : c.cfg.integers("ubiquity.t_values")) {
    if (t < 1) config_error("ubiquity.t_values", "levels must be positive");
    ts.push_back(static_cast<int>(t));
  }
  Ball ball = parse_ball(c.cfg, "ubiquity.ball_center", "ubiquity.ball_radius", spec.n());
  CoverOptions opts;
  opts.samples = static_cast<uint64_t>(c.cfg.integer_or("ubiquity.samples", 10000));
  opts.seed = c.seed;
  opts.threads = c.threads;
  const double max_hw = c.cfg.number_or("ubiquity.max_half_width", 0.02);
  const double stability = c.cfg.number_or("ubiquity.stability", 2);
  const int64_t q_max = c.cfg.integer_or("ubiquity.resonant_q_max", 0);

  Interval mk = min_k(spec.n(), spec.d());
  const bool k_ok = certainly_less(mk, Interval(k, 128));
  RegularityReport reg = regularity_check(psi, spec, k, ts);
  std::string csv = "t,samples,hits,fraction,ci_low,ci_high,half_width,rho\n";
  std::vector<double> fractions;
  bool widths_ok = true;
  for (int t : ts) {
    CoverReport r = covering_fraction(ball, k, t, psi, spec, opts, c.prec);
    csv += std::to_string(t) + "," + std::to_string(r.samples) + "," + std::to_string(r.hits) +
           "," + fmt(r.fraction) + "," + fmt(r.ci_low) + "," + fmt(r.ci_high) + "," +
           fmt(r.half_width) + "," + fmt(r.rho) + "\n";
    fractions.push_back(r.fraction);
    widths_ok = widths_ok && r.half_width < max_hw;
  }
  bool positive = std::all_of(fractions.begin(), fractions.end(), [](double f) { return f > 0; });
  bool stable = positive;
  for (size_t i = 1; stable && i < fractions.size(); ++i) {
    const double hi = std::max(fractions[i], fractions[i - 1]);
    const double lo = std::min(fractions[i], fractions[i - 1]);
    stable = hi <= stability * lo;
  }
  Outputs out;
  out.files.emplace_back("levels.csv", csv);
  if (q_max > 0) {
    out.files.emplace_back("resonant.csv",
                           resonant_csv(resonant_points(spec, psi, q_max, {}, c.prec), psi,
                                        spec.d(), spec.n()));
  }
  out.pass = k_ok && reg.ok && positive && stable && widths_ok;
  json s = summary_base("ubiquity-verify");
  s["min_k"] = mk.hi_up();
  s["k"] = k;
  s["k_exceeds_min"] = k_ok;
  s["regular"] = reg.ok;
  s["regularity_ratios"] = reg.ratios;
  s["fractions"] = fractions;
  s["kappa"] = fractions.empty() ? 0.0 : *std::min_element(fractions.begin(), fractions.end());
  s["stable"] = stable;
  s["half_widths_ok"] = widths_ok;
  out.summary = "kappa " + fmt(s["kappa"].get<double>()) + (stable ? ", stable" : ", unstable");
  finish(out, s);
  return out;
}

Outputs run_approx_measure(const Context& c) {
  AffineSubspaceSpec spec = parse_subspace(c.cfg);
  ApproxFunction psi = parse_psi(c.cfg);
  auto grid = c.cfg.integers("measure.grid");
  if (!std::is_sorted(grid.begin(), grid.end()) || grid.front() < 1) {
    config_error("measure.grid", "must be ascending and positive");
  }
  const int64_t samples = c.cfg.integer("measure.samples");
  check_positive("measure.samples", samples);
  const int64_t q_min = c.cfg.integer_or("measure.q_min", 1);
  check_positive("measure.q_min", q_min);
  auto rows = empirical_measure(spec, psi, grid, static_cast<uint64_t>(samples), c.seed,
                                c.threads, q_min, c.prec);
  bool non_decreasing = true;
  for (size_t i = 1; i < rows.size(); ++i) {
    non_decreasing = non_decreasing && rows[i].hits >= rows[i - 1].hits;
  }
  const bool increased = rows.size() >= 2 && rows.back().hits > rows.front().hits;
  Outputs out;
  out.pass = non_decreasing;
  json s = summary_base("approx-measure");
  if (c.cfg.has("measure.target")) {
    const Rational target = c.cfg.rational("measure.target");
    const bool reached = Rational(rows.back().hits) >= target * Rational(rows.back().samples);
    out.pass = out.pass && reached;
    s["target"] = target.get_str();
    s["target_reached"] = reached;
  }
  out.files.emplace_back("measure.csv", measure_csv(rows));
  s["non_decreasing"] = non_decreasing;
  s["strictly_increased"] = increased;
  s["final_fraction"] = rows.back().fraction;
  s["q_min"] = q_min;
  s["seed"] = c.seed;
  out.summary = "final fraction " + fmt(rows.back().fraction);
  finish(out, s);
  return out;
}

Outputs run_dimension(const Context& c) {
  const std::string mode = c.cfg.str("dimension.mode");
  const Rational tau = c.cfg.rational("dimension.tau");
  DimensionOptions opts;
  opts.scale_lo = static_cast<int>(c.cfg.integer("dimension.scale_lo"));
  opts.scale_hi = static_cast<int>(c.cfg.integer("dimension.scale_hi"));
  opts.fit_lo = static_cast<int>(c.cfg.integer("dimension.fit_lo"));
  opts.fit_hi = static_cast<int>(c.cfg.integer("dimension.fit_hi"));
  opts.q_cap = c.cfg.integer_or("dimension.q_cap", opts.q_cap);
  opts.threads = c.threads;
  if (opts.scale_lo < 1 || opts.scale_lo > opts.fit_lo || opts.fit_lo >= opts.fit_hi ||
      opts.fit_hi > opts.scale_hi) {
    config_error("dimension.fit_lo", "need 1 <= scale_lo <= fit_lo < fit_hi <= scale_hi");
  }
  const double tol = c.cfg.number_or("dimension.tolerance", 0.1);
  DimensionEstimate e;
  if (mode == "subspace") {
    require_fields(c.cfg, {"subspace.d", "subspace.n", "subspace.tilt", "subspace.shift"},
                   "mode = subspace");
    e = box_dimension(parse_subspace(c.cfg), tau, opts, c.prec);
  } else if (mode == "line") {
    e = box_dimension_line(tau, opts, c.prec);
  } else {
    config_error("dimension.mode", "expected subspace or line");
  }
  std::string csv = "scale,q_block,count\n";
  for (size_t i = 0; i < e.scales.size(); ++i) {
    csv += fmt(e.scales[i]) + "," + std::to_string(e.q_block[i]) + "," +
           std::to_string(e.counts[i]) + "\n";
  }
  Outputs out;
  const double dev = std::fabs(e.slope - e.formula_value);
  out.pass = dev <= tol;
  out.files.emplace_back("boxes.csv", csv);
  out.files.emplace_back("dimension.json", dimension_json(e));
  json s = summary_base("dimension");
  s["mode"] = mode;
  s["slope"] = e.slope;
  s["formula"] = e.formula_value;
  s["deviation"] = dev;
  s["tolerance"] = tol;
  out.summary = "slope " + fmt(e.slope) + " vs " + fmt(e.formula_value);
  finish(out, s);
  return out;
}

Outputs run_classify(const Context& c) {
  const int64_t d = c.cfg.integer("series.d");
  const int64_t n = c.cfg.integer("series.n");
  if (d < 2 || n < 1 || n >= d) config_error("series.d", "need 1 <= n < d");
  const Rational s_exp = c.cfg.rational("series.s");
  if (s_exp < 0 || s_exp > n) config_error("series.s", "must lie in [0, n]");
  const int64_t k = c.cfg.integer_or("series.k", 2);
  const int64_t T = c.cfg.integer_or("series.T", 64);
  if (k < 2) config_error("series.k", "must be at least 2");
  if (T < 8 || T > 4096) config_error("series.T", "must lie in [8, 4096]");
  struct Instance {
    std::string label;
    ApproxFunction psi;
    std::optional<SeriesVerdict> expected;
  };
  std::vector<Instance> inst;
  const Rational m = Rational(d - n) + s_exp;
  // e = n - s - tau m = -1 with sigma = 0.
  inst.push_back({"boundary", ApproxFunction::power((Rational(n) - s_exp + 1) / m),
                  SeriesVerdict::kDiverges});
  if (c.cfg.has("series.instances")) {
    for (const auto& tok : c.cfg.tokens("series.instances")) {
      auto colon = tok.find(':');
      if (colon == std::string::npos) config_error("series.instances", "entries are tau:sigma");
      Rational tau = parse_exact("series.instances", tok.substr(0, colon)).as_rational();
      Rational sigma = parse_exact("series.instances", tok.substr(colon + 1)).as_rational();
      if (tau < 0 || sigma < 0) config_error("series.instances", "tau and sigma must be >= 0");
      inst.push_back({"config", ApproxFunction::power_log(Rational(1), tau, sigma), std::nullopt});
    }
  }
  const int64_t random = c.cfg.integer_or("series.random", 0);
  if (random < 0) config_error("series.random", "must be non-negative");
  for (int64_t i = 0; i < random; ++i) {
    Stream st(c.seed, static_cast<uint64_t>(i));
    Rational tau(st.uniform_int(0, 12), st.uniform_int(1, 4));
    Rational sigma(st.uniform_int(0, 8), 4);
    Rational cc(st.uniform_int(1, 8), st.uniform_int(1, 4));
    tau.canonicalize();
    sigma.canonicalize();
    cc.canonicalize();
    inst.push_back({"random", ApproxFunction::power_log(cc, tau, sigma), std::nullopt});
  }
  if (c.cfg.has("series.eps")) {
    for (const auto& eps : c.cfg.rationals("series.eps")) {
      if (eps <= 0) config_error("series.eps", "each eps must be positive");
      inst.push_back({"cantelli", cantelli_function(static_cast<int>(d), static_cast<int>(n), s_exp, eps),
                      SeriesVerdict::kConverges});
    }
  }
  std::string csv = "label,c,tau,sigma,classifier,condensation,growth,log_power,agree\n";
  size_t agree = 0;
  bool expected_ok = true;
  for (const auto& in : inst) {
    SeriesVerdict cls = divergence_classifier(in.psi, static_cast<int>(d), static_cast<int>(n), s_exp);
    CondensationReport rep = condensation_check(in.psi, static_cast<int>(d), static_cast<int>(n),
                                                s_exp, k, static_cast<int>(T));
    const bool ok = rep.verdict && *rep.verdict == cls;
    agree += ok;
    if (in.expected && cls != *in.expected) expected_ok = false;
    csv += in.label + "," + in.psi.c().get_str() + "," + in.psi.tau().get_str() + "," +
           in.psi.sigma().get_str() + "," + verdict_name(cls) + "," +
           (rep.verdict ? verdict_name(*rep.verdict) : std::string("undecided")) + "," +
           fmt(rep.growth) + "," + fmt(rep.log_power) + "," + (ok ? "1" : "0") + "\n";
  }
  Outputs out;
  out.pass = agree == inst.size() && expected_ok;
  out.files.emplace_back("series.csv", csv);
  json s = summary_base("classify-series");
  s["instances"] = inst.size();
  s["agree"] = agree;
  s["expected_verdicts_hold"] = expected_ok;
  s["seed"] = c.seed;
  out.summary = std::to_string(agree) + "/" + std::to_string(inst.size()) + " agree";
  finish(out, s);
  return out;
}

using Runner = Outputs (*)(const Context&);

Runner runner_for(const std::string& sub) {
  static const std::map<std::string, Runner> r = {
      {"mad-estimate", run_mad_estimate},   {"mad-sum", run_mad_sum},
      {"selberg-check", run_selberg},       {"count-verify", run_count_verify},
      {"minkowski-solve", run_minkowski},   {"cover-check", run_cover_check},
      {"ubiquity-verify", run_ubiquity},    {"approx-measure", run_approx_measure},
      {"dimension", run_dimension},         {"classify-series", run_classify},
  };
  auto it = r.find(sub);
  if (it == r.end()) fail(ErrorCode::kConfig, "unknown subcommand '" + sub + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// Execution and ledger

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorCode::kIo, "cannot write " + path.string());
  os << data;
  if (!os) fail(ErrorCode::kIo, "write failed for " + path.string());
}

RunRecord execute(const std::string& sub, const std::string& canonical, uint64_t seed,
                  int threads, long bits, uint64_t budget, const fs::path& dir) {
  RunRecord rec;
  rec.subcommand = sub;
  rec.config = canonical;
  rec.seed = seed;
  rec.bits = bits;
  rec.budget = budget;
  rec.threads = threads;
  rec.run_id = run_id_for(sub, canonical, seed, bits, budget);
  rec.started = utc_now();
  Config cfg(canonical);
  Context ctx{cfg, seed, threads, Precision{std::max<long>(bits, 64), std::max<long>(bits, 4096)},
              budget};
  try {
    Outputs out = runner_for(sub)(ctx);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
    for (const auto& [name, data] : out.files) {
      write_file(dir / name, data);
      rec.outputs.push_back({name, sha256_hex(data)});
    }
    rec.pass = out.pass;
    rec.exit_code = out.pass ? 0 : 1;
    rec.summary = out.summary;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    rec.pass = false;
    rec.exit_code = exit_code_for(e.code());
    rec.error = std::string(error_code_name(e.code())) + ": " + sub + ": " + e.what();
    rec.summary = rec.error;
  }
  rec.finished = utc_now();
  return rec;
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  r.run_id = j.at("run_id").get<std::string>();
  r.subcommand = j.at("subcommand").get<std::string>();
  r.config = j.at("config").get<std::string>();
  r.seed = j.at("seed").get<uint64_t>();
  r.bits = j.at("bits").get<long>();
  r.budget = j.at("budget").get<uint64_t>();
  r.threads = j.at("threads").get<int>();
  r.started = j.at("started").get<std::string>();
  r.finished = j.at("finished").get<std::string>();
  for (const auto& o : j.at("outputs")) {
    r.outputs.push_back({o.at("file").get<std::string>(), o.at("sha256").get<std::string>()});
  }
  r.pass = j.at("pass").get<bool>();
  r.exit_code = j.at("exit_code").get<int>();
  r.summary = j.at("summary").get<std::string>();
  r.error = j.value("error", std::string());
  return r;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {
      "mad-estimate",    "mad-sum",     "selberg-check",   "count-verify",   "minkowski-solve",
      "cover-check",     "ubiquity-verify", "approx-measure", "dimension",   "classify-series"};
  return names;
}

std::string canonical_config(const std::string& subcommand, const std::string& text) {
  Config cfg(text);
  validate(subcommand, cfg);
  return cfg.canonical();
}

std::string run_id_for(const std::string& subcommand, const std::string& canonical,
                       uint64_t seed, long bits, uint64_t budget) {
  std::string material = "subcommand = " + subcommand + "\n" + canonical + "[run]\nseed = " +
                         std::to_string(seed) + "\nbits = " + std::to_string(bits) +
                         "\nbudget = " + std::to_string(budget) + "\n";
  return sha256_hex(material).substr(0, 16);
}

RunRecord run_experiment(const RunOptions& opts) {
  schema_for(opts.subcommand);
  if (opts.threads < 1) fail(ErrorCode::kConfig, "--threads must be positive");
  if (opts.bits < 16) fail(ErrorCode::kConfig, "--bits must be at least 16");
  if (opts.budget == 0) fail(ErrorCode::kConfig, "--budget must be positive");
  std::ifstream is(opts.config_path, std::ios::binary);
  if (!is) fail(ErrorCode::kConfig, "cannot read config file '" + opts.config_path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string canonical = canonical_config(opts.subcommand, ss.str());
  const std::string id = run_id_for(opts.subcommand, canonical, opts.seed, opts.bits, opts.budget);
  const fs::path out(opts.out_dir);
  RunRecord rec = execute(opts.subcommand, canonical, opts.seed, opts.threads, opts.bits,
                          opts.budget, out / id);
  std::error_code ec;
  fs::create_directories(out, ec);
  std::ofstream ledger(out / kLedgerFile, std::ios::app | std::ios::binary);
  if (!ledger) fail(ErrorCode::kIo, "cannot append to " + (out / kLedgerFile).string());
  ledger << record_json(rec) << "\n";
  return rec;
}

std::vector<RunRecord> read_ledger(const std::string& out_dir) {
  std::vector<RunRecord> out;
  std::ifstream is(fs::path(out_dir) / kLedgerFile, std::ios::binary);
  if (!is) return out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      fail(ErrorCode::kIo, "ledger line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

ReplayVerdict replay_run(const std::string& out_dir, const std::string& run_id, int threads) {
  auto ledger = read_ledger(out_dir);
  auto it = std::find_if(ledger.rbegin(), ledger.rend(),
                         [&](const RunRecord& r) { return r.run_id == run_id; });
  if (it == ledger.rend()) fail(ErrorCode::kNotFound, "run_id '" + run_id + "' not in ledger");
  const RunRecord& orig = *it;
  ReplayVerdict v;
  v.run_id = run_id;
  v.rerun = execute(orig.subcommand, orig.config, orig.seed, threads > 0 ? threads : orig.threads,
                    orig.bits, orig.budget, fs::path(out_dir) / "replay" / run_id);
  std::map<std::string, std::string> actual;
  for (const auto& o : v.rerun.outputs) actual[o.file] = o.sha256;
  v.match = v.rerun.exit_code == orig.exit_code && v.rerun.outputs.size() == orig.outputs.size();
  for (const auto& o : orig.outputs) {
    FileCheck fc{o.file, o.sha256, actual.count(o.file) ? actual[o.file] : "", false};
    fc.match = fc.actual == fc.expected;
    v.match = v.match && fc.match;
    v.files.push_back(fc);
  }
  return v;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk:
      return 0;
    case ErrorCode::kRationalResonance:
    case ErrorCode::kDigestMismatch:
      return 1;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kConfig:
    case ErrorCode::kDegenerateTilt:
    case ErrorCode::kDomain:
    case ErrorCode::kNotFound:
    case ErrorCode::kIo:
      return 2;
    case ErrorCode::kPrecisionExhausted:
    case ErrorCode::kBudgetExceeded:
    case ErrorCode::kSolverIncomplete:
    case ErrorCode::kInternal:
      return 3;
  }
  return 3;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorCode::kInternal, "sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string record_json(const RunRecord& r) {
  json outputs = json::array();
  for (const auto& o : r.outputs) outputs.push_back({{"file", o.file}, {"sha256", o.sha256}});
  json j = {{"run_id", r.run_id},   {"subcommand", r.subcommand}, {"config", r.config},
            {"seed", r.seed},       {"bits", r.bits},             {"budget", r.budget},
            {"threads", r.threads}, {"started", r.started},       {"finished", r.finished},
            {"outputs", outputs},   {"pass", r.pass},             {"exit_code", r.exit_code},
            {"summary", r.summary}};
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump();
}

}  // namespace diophlab
