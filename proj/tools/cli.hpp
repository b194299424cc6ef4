#pragma once

#include "ngm/errors.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ngm::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kPreconditionError = 3,
  kEngineMismatch = 4,
};

int exit_code_for(ErrorKind kind);

// Runs the command line (args excludes the program name). Results go to
// `out`; diagnostics and error JSON go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ngm::cli
