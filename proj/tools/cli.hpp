#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tomoqubo::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kUsage = 2, kValidation = 3 };

/// Runs one subcommand (phantom, project, build, solve, reconstruct,
/// baseline, compare). args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tomoqubo::cli
