#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hslab::cli {

enum ExitCode { kPass = 0, kCheckFailure = 1, kInputError = 2 };

/// Runs one subcommand. `args` excludes the program name. Reports go to
/// `out` unless an output directory is configured; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hslab::cli
