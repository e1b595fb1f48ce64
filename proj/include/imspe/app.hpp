#pragma once

#include <string>
#include <vector>

namespace imspe {

// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitSingular = 3,
    kExitSolver = 4,
    kExitBreach = 5,
};

struct CommandResult {
    int exit_code = kExitOk;
    std::string out;  // payload (already written to --output when that flag is given)
    std::string err;
};

// Runs one invocation; args exclude the program name.
CommandResult run_cli(const std::vector<std::string>& args);

}  // namespace imspe
