#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace onlinecp::cli {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

// Runs one invocation; args excludes the program name. Reports go to out,
// progress and error messages to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace onlinecp::cli
