#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bks {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInputError = 2, kExitInternalError = 3 };

/// Entry point behind the bkscheck binary; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bks
