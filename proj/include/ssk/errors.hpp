#pragma once

#include <stdexcept>
#include <string>

namespace ssk {

// Bad arguments or violated preconditions. The CLI maps these to exit status 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation that could not be completed (solver, quadrature, sampling).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ssk
