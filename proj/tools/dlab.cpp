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


// dlab: command-line front end over the diophlab C API.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "diophlab/diophlab.h"

namespace {

struct RunFlags {
  std::string config;
  uint64_t seed = 1;
  int threads = 1;
  long bits = 128;
  uint64_t budget = 0;
  std::string out = "runs";
};

int report_error(dl_context* ctx, dl_status st) {
  std::fprintf(stderr, "dlab: %s: %s\n", dl_status_name(st), dl_last_error(ctx));
  return dl_exit_code(st);
}

int do_run(dl_context* ctx, const std::string& sub, const RunFlags& f) {
  dl_run_options opts;
  dl_run_options_init(&opts);
  opts.subcommand = sub.c_str();
  opts.config_path = f.config.c_str();
  opts.seed = f.seed;
  opts.threads = f.threads;
  opts.bits = f.bits;
  if (f.budget) opts.budget = f.budget;
  opts.out_dir = f.out.c_str();
  dl_run* run = nullptr;
  dl_status st = dl_run_experiment(ctx, &opts, &run);
  if (st != DL_OK) return report_error(ctx, st);
  std::printf("run_id %s\n", dl_run_id(run));
  for (size_t i = 0; i < dl_run_output_count(run); ++i) {
    std::printf("  %s/%s/%s  sha256 %s\n", f.out.c_str(), dl_run_id(run),
                dl_run_output_file(run, i), dl_run_output_sha256(run, i));
  }
  const int code = dl_run_exit_code(run);
  if (*dl_run_error(run)) std::fprintf(stderr, "dlab: %s\n", dl_run_error(run));
  std::printf("%s: %s\n", code == 0 ? "PASS" : "FAIL", dl_run_summary(run));
  dl_run_free(run);
  return code;
}

int do_replay(dl_context* ctx, const std::string& out, const std::string& id, int threads) {
  dl_replay* r = nullptr;
  dl_status st = dl_replay_run(ctx, out.c_str(), id.c_str(), threads, &r);
  if (st != DL_OK) return report_error(ctx, st);
  for (size_t i = 0; i < dl_replay_file_count(r); ++i) {
    if (dl_replay_file_match(r, i)) {
      std::printf("  match     %s\n", dl_replay_file(r, i));
    } else {
      std::printf("  MISMATCH  %s expected %s got %s\n", dl_replay_file(r, i),
                  dl_replay_expected(r, i),
                  *dl_replay_actual(r, i) ? dl_replay_actual(r, i) : "(missing)");
    }
  }
  const int match = dl_replay_match(r);
  std::printf("%s\n", match ? "replay: match" : "replay: digest mismatch");
  dl_replay_free(r);
  return match ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diophlab experiments: seeded, ledgered, replayable runs"};
  app.require_subcommand(1);
  RunFlags flags;
  std::string replay_id;
  std::string replay_out = "runs";
  int replay_threads = 0;

  for (size_t i = 0; i < dl_subcommand_count(); ++i) {
    const std::string name = dl_subcommand_name(i);
    CLI::App* sub = app.add_subcommand(name, "run " + name);
    sub->add_option("--config", flags.config, "INI config file")->required();
    sub->add_option("--seed", flags.seed, "64-bit seed");
    sub->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--bits", flags.bits, "precision floor in bits")->check(CLI::Range(16L, 1L << 20));
    sub->add_option("--budget", flags.budget, "membership-test cap")->check(CLI::PositiveNumber);
    sub->add_option("--out", flags.out, "output directory");
  }
  CLI::App* replay = app.add_subcommand("replay", "re-execute a ledger entry and compare digests");
  replay->add_option("run_id", replay_id, "run id from the ledger")->required();
  replay->add_option("--out", replay_out, "output directory holding ledger.jsonl");
  replay->add_option("--threads", replay_threads, "override the recorded thread count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  dl_context* ctx = nullptr;
  if (dl_context_new(&ctx) != DL_OK) return 3;
  int code = 0;
  CLI::App* chosen = app.get_subcommands().front();
  if (chosen == replay) {
    code = do_replay(ctx, replay_out, replay_id, replay_threads);
  } else {
    code = do_run(ctx, chosen->get_name(), flags);
  }
  dl_context_free(ctx);
  return code;
}
