#pragma once

#include <iosfwd>

namespace bezmod {

// Full command-line front end. Returns the process exit code: 0 success,
// 2 parse error, 3 capability error, 1 anything else. All output goes to
// the given streams so tests can capture it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bezmod
