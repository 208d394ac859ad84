#pragma once

#include <iosfwd>

namespace borndev::cli {

// Full CLI entry point. Exit codes: 0 success, 2 configuration error,
// 3 computation error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace borndev::cli
