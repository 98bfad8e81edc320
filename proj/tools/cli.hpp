#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gmncs::cli {

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out` unless a command writes to --out; diagnostics go to `err`.
/// Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gmncs::cli
