#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sobnet::cli {

inline constexpr std::string_view kVersion = "1.0.0";

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kBoundFailure = 2,
  kNumericalFailure = 3,
};

/// Runs the command line `args` (without the program name). Diagnostics go
/// to `err`; data goes to files named by flags, or to `out` when none is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Splits a shell-like command line on whitespace (no quoting).
std::vector<std::string> split_command(std::string_view line);

/// The "command:" line of a CSV header written by this tool, as arguments
/// (without the leading program name). Empty if absent.
std::vector<std::string> echoed_command(const std::vector<std::string>& comments);

}  // namespace sobnet::cli
