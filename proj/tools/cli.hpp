#pragma once

#include <iosfwd>

namespace randinf::cli {

/// Runs one subcommand. Returns 0 on success, 2 on invalid input, 3 when a
/// cap or budget ran out.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace randinf::cli
