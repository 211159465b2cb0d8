#pragma once

#include <stdexcept>

namespace nlop {

// Quadrature could not certify the requested tolerance.
struct accuracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Discrete search hit its boundary; result not trustworthy at this resolution.
struct resolution_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nlop
