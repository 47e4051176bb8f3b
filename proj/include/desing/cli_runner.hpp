#pragma once

#include <filesystem>
#include <string>

// Command implementations behind the CLI: parse a JSON config, run, write
// CSV bundles and a manifest into the output directory.  Returns the process
// exit code contract:
//   obstruction: 0 = unobstructed at tolerance, 1 = obstructed, 2 = error
//   hitchin-thorpe: 0 = verdict computed, 2 = error
//   study: 0 = done, 1 = structured refusal (picard hypotheses), 2 = error

namespace desing {

struct RunOptions {
  std::filesystem::path config_path;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  bool seed_overridden = false;
  int threads = 1;
};

int run_obstruction(const RunOptions& opt);
int run_hitchin_thorpe(const RunOptions& opt);
int run_study(const RunOptions& opt);

// dispatch on the config's "command" field
int run_command(const std::string& command, const RunOptions& opt);

}  // namespace desing
