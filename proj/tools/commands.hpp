#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fpsa::cli {

/// Parses `args` (subcommand first, no program name), runs the command and
/// returns its exit code. With `record`, a manifest line is appended after any
/// command that got past argument parsing.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool record = true);

}  // namespace fpsa::cli
