#include <iostream>

#include "CLI11.hpp"

#include "desing/cli_runner.hpp"
#include "desing/io.hpp"
#include "json.hpp"

// Command-line front end.  Subcommands mirror the config "command" field;
// exit codes: obstruction 0 = unobstructed, 1 = obstructed, 2 = error;
// studies return 1 on a structured picard refusal.

int main(int argc, char** argv) {
  CLI::App app{"einstein-orbifold desingularization toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  desing::RunOptions opt;
  std::string seed_str;
  app.add_option("--config", opt.config_path, "config file (json)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", opt.out_dir, "output directory")->required();
  auto* seed_opt = app.add_option("--seed", opt.seed, "seed for randomized runs");
  app.add_option("--threads", opt.threads, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);

  auto* obstruction = app.add_subcommand("obstruction", "orientation scan + det R tests");
  auto* ht = app.add_subcommand("hitchin-thorpe", "tree bookkeeping verdict");
  auto* study = app.add_subcommand("study",
                                   "annulus | residual-scaling | pinching | "
                                   "sin-warp | picard");

  CLI11_PARSE(app, argc, argv);
  opt.seed_overridden = seed_opt->count() > 0;

  // the config's command field must match the chosen subcommand
  try {
    auto cfg = nlohmann::json::parse(desing::read_file(opt.config_path));
    const std::string declared = cfg.value("command", std::string{});
    const std::string chosen = obstruction->parsed()   ? "obstruction"
                               : ht->parsed()          ? "hitchin-thorpe"
                               : study->parsed()       ? "study"
                                                       : "";
    if (!declared.empty() && declared != chosen) {
      std::cerr << "config declares command '" << declared
                << "' but subcommand '" << chosen << "' was invoked\n";
      return 2;
    }
    return desing::run_command(chosen, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
