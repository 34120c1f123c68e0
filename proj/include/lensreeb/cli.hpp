#pragma once

// Command-line front end.  Exit codes: 0 success, 2 when the computation ran
// but the mathematical outcome is not a success (inconclusive certificate,
// orbit not found, degenerate index), 1 for usage and input errors.  Errors
// are reported as one JSON object per line on the error stream.

#include <ostream>

namespace lensreeb::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lensreeb::cli
