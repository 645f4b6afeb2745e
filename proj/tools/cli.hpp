#pragma once

#include "chebproxy/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace chebproxy::cli {

/// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 2,        ///< bad flags, unknown oracle, invalid parameters
    exit_convergence = 3,  ///< adaptive build stopped above its tolerance
    exit_domain = 4,       ///< point outside a proxy box
    exit_io = 5,           ///< unreadable input, unwritable output
    exit_format = 6,       ///< malformed, mismatched or incompatible files
};

int exit_code_for(ErrorKind kind) noexcept;

/// Runs one command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chebproxy::cli
