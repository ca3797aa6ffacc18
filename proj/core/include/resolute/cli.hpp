#pragma once

#include <string>
#include <vector>

namespace resolute {

/// Command-line entry point. Subcommands: filter, phase, simulate, fisher,
/// compare, optimize, chirp, fit. Returns 0 on success, 1 on usage errors,
/// 2 on computation errors.
int run_command(const std::vector<std::string>& args);
int run_command(int argc, const char* const* argv);

}  // namespace resolute
