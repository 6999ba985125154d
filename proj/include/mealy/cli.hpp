#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mealy {

/// Runs the command-line tool with `args` (program name excluded) and
/// returns the process exit code: 0 success, 2 parse or input error,
/// 3 invariant violation, 4 unsupported class or missing prerequisite,
/// 5 size cap or sampling budget exceeded, 1 internal error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mealy
