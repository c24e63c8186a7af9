#pragma once

#include <ostream>

namespace onto {

/// Exit codes: 0 success, 1 usage, 2 input or ordering, 3 runtime failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace onto
