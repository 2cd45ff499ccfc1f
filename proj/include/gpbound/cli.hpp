#ifndef GPBOUND_CLI_HPP
#define GPBOUND_CLI_HPP

#include "gpbound/bounds.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace gpbound {

// Exit codes. A total function of BoundResult::status plus the I/O cases.
inline constexpr int kExitBound = 0;
inline constexpr int kExitFailure = 1;  // verify found a violation, or an unexpected error
inline constexpr int kExitNegInfinity = 2;
inline constexpr int kExitNotGeometric = 3;
inline constexpr int kExitInfeasible = 4;
inline constexpr int kExitInput = 5;  // unreadable problem, bad flags, verify without a box

int exit_code(BoundStatus status);

/// Log level from GPBOUND_LOG: 0 quiet (default), 1 info, 2 debug. Accepts
/// the numbers or the words.
int log_level();

/// gpbound bound|trivial|verify|bench ...; argv[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gpbound

#endif  // GPBOUND_CLI_HPP
