#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hhv {

/// Runs the command line `args` (without the program name).
/// Returns 0 if every check holds, 1 if a violation was reported, 2 on
/// usage, parse or domain errors (message on `err`).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hhv
