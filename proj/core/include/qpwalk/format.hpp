#pragma once

#include <string>

namespace qpwalk {

/// Shortest decimal text that parses back to exactly v.
std::string shortest(double v);

}  // namespace qpwalk
