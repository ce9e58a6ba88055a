#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace plq {

/// Runs the command line (without the program name). Returns the exit code:
/// 0 success, 1 negative result, 2 input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plq
