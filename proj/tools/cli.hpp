#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace censreg::cli {

/// Runs the command line `args` (without the program name). Exit codes:
/// 0 success, 1 invalid input or arguments, 2 singular weighted Gram matrix.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace censreg::cli
