#pragma once

#include <ostream>

namespace qpwalk::cli {

/// Exit codes: 0 success, 2 validation failure, 3 numerical failure,
/// 64 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qpwalk::cli
