#pragma once

#include <iosfwd>

namespace superliouville {

/// Parses the command line and runs one subcommand. Returns the exit code:
/// 0 pass, 1 gate failure, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace superliouville
