#pragma once

// The command-line front end. Kept in the library so tests can run whole
// invocations in-process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace reelab {

inline constexpr std::uint64_t kDefaultSeed = 2008;

struct RunConfig {
  std::string subcommand;
  std::optional<int> n, k, k2;
  std::string kvec, kvec2;
  std::optional<int> N;
  std::optional<double> x, s;
  std::string state;
  std::string figure;
  std::string suite = "all";
  int grid = 101;
  int samples = 10000;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format = "json";
  bool skip_numeric = false;
  int max_iterations = 500;
};

/// Runs one invocation; returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Subcommand bodies: each returns its full output; verify also sets `status`.
std::string cmd_measure(const RunConfig& cfg);
std::string cmd_figure(const RunConfig& cfg);
std::string cmd_verify(const RunConfig& cfg, int& status);
std::string cmd_trace_down(const RunConfig& cfg);
std::string cmd_dur(const RunConfig& cfg);
std::string cmd_solve(const RunConfig& cfg);

}  // namespace reelab
