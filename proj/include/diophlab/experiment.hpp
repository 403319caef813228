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


// Seeded experiment runs driven by INI configs. Each run writes its outputs
// to <out>/<run_id>/ and appends one JSON line to <out>/ledger.jsonl; replay
// re-executes a ledger entry and compares file digests.

#ifndef DIOPHLAB_EXPERIMENT_HPP_
#define DIOPHLAB_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "diophlab/counting.hpp"
#include "diophlab/error.hpp"

namespace diophlab {

struct RunOptions {
  std::string subcommand;
  std::string config_path;
  uint64_t seed = 1;
  int threads = 1;
  long bits = 128;  // precision floor
  uint64_t budget = kDefaultTestBudget;
  std::string out_dir = "runs";
};

struct OutputDigest {
  std::string file;
  std::string sha256;
};

struct RunRecord {
  std::string run_id;
  std::string subcommand;
  std::string config;  // canonical text
  uint64_t seed = 0;
  long bits = 128;
  uint64_t budget = 0;
  int threads = 1;
  std::string started;
  std::string finished;
  std::vector<OutputDigest> outputs;
  bool pass = false;
  int exit_code = 0;
  std::string summary;
  std::string error;  // set when execution stopped on an error
};

const std::vector<std::string>& subcommand_names();

// Parses and validates `text` for the subcommand and returns the canonical
// form. Throws kConfig listing every missing or unknown field.
std::string canonical_config(const std::string& subcommand, const std::string& text);

std::string run_id_for(const std::string& subcommand, const std::string& canonical,
                       uint64_t seed, long bits, uint64_t budget);

// Validation errors throw; errors raised while executing are recorded in the
// ledger entry and reflected in exit_code.
RunRecord run_experiment(const RunOptions& opts);

struct FileCheck {
  std::string file;
  std::string expected;
  std::string actual;  // empty when the file was not produced
  bool match = false;
};

struct ReplayVerdict {
  std::string run_id;
  bool match = false;
  std::vector<FileCheck> files;
  RunRecord rerun;
};

// Re-executes the newest ledger entry with this id into
// <out>/replay/<run_id>/. threads <= 0 keeps the recorded count. Throws
// kNotFound for an unknown id.
ReplayVerdict replay_run(const std::string& out_dir, const std::string& run_id, int threads);

std::vector<RunRecord> read_ledger(const std::string& out_dir);

// 0 pass, 1 verification failure, 2 config error, 3 budget or precision.
int exit_code_for(ErrorCode code);

std::string sha256_hex(const std::string& data);

std::string record_json(const RunRecord& r);

}  // namespace diophlab

#endif  // DIOPHLAB_EXPERIMENT_HPP_
