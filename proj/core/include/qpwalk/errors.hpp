#pragma once

#include <stdexcept>
#include <string>

namespace qpwalk {

/// Input rejected before any numerics run: bad rates, bad parameters,
/// structural violations.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical step could not be completed (degenerate roots, singular
/// limits, non-convergence, unsupported root configuration).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qpwalk
