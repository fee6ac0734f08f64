#ifndef FKMORSE_TOOLS_CLI_HPP
#define FKMORSE_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fkmorse::cli {

// Process exit codes.
enum Exit : int {
    kOk = 0,
    kFailure = 1,     // I/O and anything unclassified
    kUsage = 2,       // bad flags, unparsable input, out-of-range parameters
    kScope = 3,       // truncation or resource limits
    kRejected = 4,    // validator or self-check reported a failure
    kInvariant = 5,   // an embedded consistency check tripped
};

// Runs one command line (args excludes the program name). Regular output goes
// to out unless --output names a file; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fkmorse::cli

#endif
