#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mvi {

/// Runs one subcommand; returns 0 on success, 1 on an invalid certificate or
/// failed selftest, 2 on malformed input.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mvi
