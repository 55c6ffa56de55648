#pragma once

#include <stdexcept>
#include <string>

namespace cvnet {

// Raised when a computation cannot produce a meaningful number from
// otherwise well-formed input (singular matrices, unphysical covariances,
// fits that do not converge).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for malformed scenario files and out-of-range configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cvnet
