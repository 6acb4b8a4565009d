#pragma once

#include <ostream>

namespace publist::cli {

enum ExitCode : int { ok = 0, validation_failure = 1, bad_arguments = 2, internal_error = 3 };

/// Runs one command line; output and diagnostics go to the given streams.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace publist::cli
