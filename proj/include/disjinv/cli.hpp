#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace disjinv
{

// Exit codes of the command-line driver.
enum ExitCode : int
{
    ExitOk = 0,           // invariant found, check passed, run contained
    ExitNegative = 1,     // no solution, check failed, run escaped the invariant
    ExitInconclusive = 2, // solver gave up or a limit was hit
    ExitUsage = 3         // bad flags, unreadable input, no predicates
};

// `disjinv infer|abstract|check|simulate FILE [flags]`; args exclude the program name.
int run_cli( const std::vector< std::string >& args, std::ostream& out, std::ostream& err );

} // namespace disjinv
