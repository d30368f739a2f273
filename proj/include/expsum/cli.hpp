#pragma once

#include <iosfwd>

namespace expsum {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,  // a verification, weight or bound check failed
  kExitParse = 2,        // bad arguments, polynomial text or input file
  kExitCap = 3,          // an enumeration or grid cap was exceeded
  kExitChain = 4,        // chain containment failed
  kExitRank = 5,         // power-sum sequence too short for its rank
};

/// Runs the CLI on argv (argv[0] is the program name).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace expsum
