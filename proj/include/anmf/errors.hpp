#pragma once

#include <stdexcept>

namespace anmf {

// Bad user-supplied parameter or configuration value. The CLI maps this to
// exit code 2.
struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical failure at run time (non-convergence, singular matrix, ...).
// The CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace anmf
