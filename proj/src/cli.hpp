#pragma once
#include <ostream>
#include <string>
#include <vector>

namespace tc {

// Dispatches one CLI invocation (args excludes the program name).
// Returns 0 on success, 1 on a domain error, 2 on an I/O or schema error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tc
