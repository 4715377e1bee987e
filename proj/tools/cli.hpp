#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace warpft::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kNumericFailure = 2,
};

/// Runs the command line `args` (without the program name). Output that a
/// subcommand emits on stdout goes to `out`, diagnostics to `err`.
auto run(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err) -> int;

/// Shortest round-trip decimal form; "nan", "inf", "-inf" otherwise.
auto format_number(double v) -> std::string;

/// "a,b,c" or "lo:hi:steps" (steps + 1 evenly spaced points).
auto parse_grid(const std::string& text) -> std::vector<double>;

}  // namespace warpft::cli
