#pragma once

#include <ostream>

namespace flowfis::cli {

/// Runs the full command-line interface. Exit codes: 0 success, 1 usage
/// error, 2 data or knowledge-base error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flowfis::cli
