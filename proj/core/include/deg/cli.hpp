#pragma once

#include <filesystem>
#include <string>

#include "deg/config.hpp"

namespace deg {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitNumericalError = 4;

/// Runs one subcommand (cycle, envelope, dynamics, circuit, sweep, optimize,
/// fit) against a parsed config, writing CSV artifacts and a run summary into
/// out_dir. Reruns with identical config and seed produce byte-identical
/// files. Throws the library's error types; run_command_guarded maps them.
void run_command(const std::string& subcommand, const RunConfig& config,
                 const std::filesystem::path& out_dir, int threads = 1);

/// run_command wrapped with the error policy: on failure writes
/// error_report.json {module, cause, ...} into out_dir, prints the cause to
/// stderr and returns the matching exit code.
[[nodiscard]] int run_command_guarded(const std::string& subcommand,
                                      const std::filesystem::path& config_path,
                                      const std::filesystem::path& out_dir,
                                      std::uint64_t seed_override,
                                      bool has_seed_override, int threads);

}  // namespace deg
