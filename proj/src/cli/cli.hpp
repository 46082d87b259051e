#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace misnet::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitUsage = 2,           // bad flags, unknown config keys, bad values
    kExitInput = 3,           // missing or unreadable inputs
    kExitProviderOutage = 4,  // bot-score provider failed; partial results written
};

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace misnet::cli
