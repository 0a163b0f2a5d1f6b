#pragma once

#include <iosfwd>

namespace clustvar::cli {

/// Exit codes: 0 success, 2 input or configuration error, 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace clustvar::cli
