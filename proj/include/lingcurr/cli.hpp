#pragma once

#include <iosfwd>

namespace lingcurr {

// Entry point of the `lingcurr` tool. Exit codes: 0 success, 1 usage error,
// 2 data or contract violation.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lingcurr
