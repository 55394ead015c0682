#pragma once

#include <iosfwd>

namespace bibcheck::cli {

enum ExitCode : int { kClean = 0, kFindings = 1, kFailure = 2 };

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bibcheck::cli
