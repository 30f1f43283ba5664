#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tw {

/// Runs one command. Exit codes: 0 success, 1 parse error, 2 validation
/// failure (not a word), 3 unsupported symbolic operation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tw
