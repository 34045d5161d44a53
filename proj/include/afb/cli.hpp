#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "afb/bounds.hpp"
#include "afb/trajectory.hpp"

namespace afb::cli {

/// Exit codes: 0 success / all checks pass, 1 a check failed or integration
/// failed, 2 invalid input.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInvalid = 2;

struct RunConfig {
  Params params = Params::oscillatory_example();
  State x0;
  double horizon = 100.0;
  Tolerances tol;
  std::optional<double> L0;
  std::filesystem::path out = ".";
  std::uint64_t seed = 1;
  std::size_t fuzz = 0;
  /// verify/plot: read this CSV instead of simulating.
  std::optional<std::filesystem::path> trajectory;
  /// verify: check against this certificate instead of recomputing one.
  std::optional<std::filesystem::path> certificate;
};

/// Reads a JSON config file. Keys: alpha, x0, horizon, rel_tol, abs_tol, L0,
/// out, seed, fuzz, trajectory, certificate. Unknown keys are rejected.
RunConfig load_config(const std::filesystem::path& path);

int cmd_bounds(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_plot(const RunConfig& config, std::ostream& out);

/// Parses arguments (subcommand plus flags, flags overriding --config) and
/// dispatches. Errors are reported on `err` and mapped to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace afb::cli
