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


#include <filesystem>
#include <fstream>
#include <sstream>

#include "diophlab/experiment.hpp"
#include "doctest.h"

using namespace diophlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("diophlab_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSystem = "[solve]\nmode = system\nk = 2\nbeta = 1 -sqrt(2) 0 1\nbounds = 1/10 10\n";
const char* kSeries =
    "[series]\nd = 2\nn = 1\ns = 1\nk = 2\nT = 32\ninstances = 1/2:0 1:0\nrandom = 6\neps = 1/10\n";

}  // namespace

TEST_CASE("run then replay") {
  TempDir dir("replay");
  RunOptions o;
  o.subcommand = "classify-series";
  o.config_path = write(dir.path / "series.ini", kSeries);
  o.out_dir = (dir.path / "out").string();
  o.seed = 3;
  RunRecord r = run_experiment(o);
  CHECK(r.pass);
  CHECK(r.exit_code == 0);
  CHECK(r.run_id.size() == 16);
  CHECK(fs::exists(dir.path / "out" / r.run_id / "series.csv"));
  CHECK(fs::exists(dir.path / "out" / r.run_id / "summary.json"));
  CHECK(slurp(dir.path / "out" / r.run_id / "summary.json").find("\"csv_float_format\": \"%.17g\"") !=
        std::string::npos);
  for (const auto& out : r.outputs) {
    CHECK(out.sha256 == sha256_hex(slurp(dir.path / "out" / r.run_id / out.file)));
  }

  for (int threads : {0, 1, 3}) {
    ReplayVerdict v = replay_run(o.out_dir, r.run_id, threads);
    CHECK(v.match);
    CHECK(v.files.size() == r.outputs.size());
    for (const auto& f : v.files) CHECK(f.match);
  }
  CHECK(fs::exists(dir.path / "out" / "replay" / r.run_id));
  // Replays leave the ledger alone.
  CHECK(read_ledger(o.out_dir).size() == 1);

  // Another seed is another run; the ledger only grows.
  const std::string before = slurp(dir.path / "out" / "ledger.jsonl");
  o.seed = 4;
  RunRecord r2 = run_experiment(o);
  CHECK(r2.run_id != r.run_id);
  const std::string after = slurp(dir.path / "out" / "ledger.jsonl");
  CHECK(after.rfind(before, 0) == 0);
  CHECK(read_ledger(o.out_dir).size() == 2);

  // The thread count is not part of the identity.
  o.seed = 3;
  o.threads = 2;
  CHECK(run_experiment(o).run_id == r.run_id);

  CHECK_THROWS_AS(replay_run(o.out_dir, "0000000000000000", 1), Error);
  try {
    replay_run(o.out_dir, "0000000000000000", 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotFound);
  }
}

TEST_CASE("tampered output is reported") {
  TempDir dir("tamper");
  RunOptions o;
  o.subcommand = "minkowski-solve";
  o.config_path = write(dir.path / "sys.ini", kSystem);
  o.out_dir = (dir.path / "out").string();
  RunRecord r = run_experiment(o);
  REQUIRE(r.pass);
  CHECK(slurp(dir.path / "out" / r.run_id / "solution.json").find("-7") != std::string::npos);
  // Rewrite the recorded digest in the ledger.
  std::string ledger = slurp(dir.path / "out" / "ledger.jsonl");
  const std::string digest = r.outputs.front().sha256;
  ledger.replace(ledger.find(digest), digest.size(), std::string(64, '0'));
  write(dir.path / "out" / "ledger.jsonl", ledger);
  ReplayVerdict v = replay_run(o.out_dir, r.run_id, 1);
  CHECK(!v.match);
}

TEST_CASE("config validation") {
  TempDir dir("config");
  RunOptions o;
  o.subcommand = "minkowski-solve";
  o.config_path = write(dir.path / "empty.ini", "");
  o.out_dir = (dir.path / "out").string();
  try {
    run_experiment(o);
    FAIL("empty config accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
    CHECK(std::string(e.what()).find("mode") != std::string::npos);
  }
  try {
    canonical_config("classify-series", "[series]\nd = 2\nbogus = 1\n");
    FAIL("unknown key accepted");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bogus") != std::string::npos);
    CHECK(msg.find("series.n") != std::string::npos);
    CHECK(msg.find("series.s") != std::string::npos);
  }
  o.subcommand = "no-such-command";
  CHECK_THROWS_AS(run_experiment(o), Error);
  CHECK(!fs::exists(dir.path / "out" / "ledger.jsonl"));
}

TEST_CASE("canonical config") {
  const std::string a = canonical_config(
      "minkowski-solve", "[solve]\nmode = system\nk = 2\nbeta = 1 -sqrt(2) 0 1\nbounds = 1/10 10\n");
  const std::string b = canonical_config(
      "minkowski-solve", "[solve]\n  bounds=1/10,   10\nbeta = 1,-sqrt(2),0,1\n\nk=2\nmode=system\n");
  CHECK(a == b);
  CHECK(run_id_for("minkowski-solve", a, 1, 128, 100) == run_id_for("minkowski-solve", b, 1, 128, 100));
  CHECK(run_id_for("minkowski-solve", a, 1, 128, 100) != run_id_for("minkowski-solve", a, 2, 128, 100));
  CHECK(run_id_for("minkowski-solve", a, 1, 128, 100) != run_id_for("minkowski-solve", a, 1, 256, 100));
}

TEST_CASE("exit codes and names") {
  CHECK(exit_code_for(ErrorCode::kOk) == 0);
  CHECK(exit_code_for(ErrorCode::kRationalResonance) == 1);
  CHECK(exit_code_for(ErrorCode::kConfig) == 2);
  CHECK(exit_code_for(ErrorCode::kInvalidArgument) == 2);
  CHECK(exit_code_for(ErrorCode::kNotFound) == 2);
  CHECK(exit_code_for(ErrorCode::kPrecisionExhausted) == 3);
  CHECK(exit_code_for(ErrorCode::kBudgetExceeded) == 3);
  CHECK(subcommand_names().size() == 10);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
