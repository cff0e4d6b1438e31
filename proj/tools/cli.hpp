#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polyvis::app {

/// Runs one command line (args exclude the program name). The report goes to
/// out, diagnostics to err. Returns the process exit code: 0 on success, 2 on
/// rejected or malformed input, 1 on internal failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyvis::app
