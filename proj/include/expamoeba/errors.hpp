#pragma once

#include <stdexcept>

namespace expamoeba {

// Malformed or inconsistent user input (dimension mismatch, parse failure,
// singular matrix, ...). The CLI maps this to exit code 2.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A frequency outside the rational span of a lattice.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Polytope work is restricted to ambient dimension <= 3 (CLI exit code 3).
struct UnsupportedDimension : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested analysis exists in theory but not in this tool (m >= 1 convexity).
struct UnsupportedOperation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace expamoeba
