#pragma once

#include <stdexcept>
#include <string>

namespace cylab {

// Malformed input: bad dimension, zero direction, negative radius.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input is well formed but outside the supported parameter range.
class OutOfDomain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical routine did not converge or produced a non-finite value.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown or malformed experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cylab
