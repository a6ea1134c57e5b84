#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "deg/cli.hpp"
#include "deg/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"deg — dielectric-elastomer generator design toolkit"};
  app.set_version_flag("--version", std::string(deg::kToolVersion));

  std::string subcommand;
  app.add_option("subcommand", subcommand,
                 "one of: cycle, envelope, dynamics, circuit, sweep, "
                 "optimize, fit")
      ->required();

  std::string config_path;
  app.add_option("--config", config_path, "path to the JSON run config")
      ->required();

  std::string out_dir = "out";
  app.add_option("--out", out_dir, "output directory for artifacts");

  std::uint64_t seed_override = 0;
  CLI::Option* seed_opt =
      app.add_option("--seed", seed_override,
                     "override the RNG seed from the config");

  int threads = 1;
  app.add_option("--threads", threads, "worker threads for sweep/optimize")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  static const std::string kNames[] = {"cycle",   "envelope", "dynamics",
                                       "circuit", "sweep",    "optimize",
                                       "fit"};
  bool known = false;
  for (const auto& n : kNames) known = known || n == subcommand;
  if (!known) {
    std::cerr << "error [cli]: unknown subcommand \"" << subcommand << "\"\n"
              << "usage: deg <cycle|envelope|dynamics|circuit|sweep|optimize|"
                 "fit> --config FILE [--out DIR] [--seed N] [--threads N]\n";
    return deg::kExitConfigError;
  }

  return deg::run_command_guarded(subcommand, config_path, out_dir,
                                  seed_override, seed_opt->count() > 0,
                                  threads);
}
