// errors.hpp — exception hierarchy shared by all modules

#pragma once

#include <stdexcept>
#include <string>

namespace cpent {

// Thrown when a numerical routine cannot meet its contract (quadrature
// non-convergence, propagator step-control failure, positivity violation).
// Precondition failures use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cpent
