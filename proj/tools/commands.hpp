#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chaid::cli {

// Runs the command line `args` (without the program name). Normal output goes
// to `out`; every failure prints exactly one "error: ..." line to `err`.
// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace chaid::cli
