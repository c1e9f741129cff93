#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cvent {

enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_unphysical = 2,
  exit_bound_violation = 3,
  exit_usage = 64,
};

/// Runs the command line `args` (without the program name). Files named by the
/// flags are written directly; "-" as --input reads `in`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace cvent
