#pragma once

#include <stdexcept>
#include <string>

namespace qrm {

// Invalid physical parameters (domain violations, collapse bound).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure that must not be hidden: eigensolver trouble, gauge
// alignment failures, non-convergence.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qrm
