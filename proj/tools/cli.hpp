#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "flowfactory/error.hpp"

namespace flowfactory::cli {

/// Process exit status for each error kind.
int exit_code(ErrorCode code);

/// Runs the command line in-process. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flowfactory::cli
