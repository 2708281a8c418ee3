#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nvcool {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2, kExitNoConvergence = 3 };

// args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nvcool
