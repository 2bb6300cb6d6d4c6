#pragma once

#include <stdexcept>
#include <string>

namespace jpa {

// Invalid user input: bad parameter values, malformed configs or datasets.
// The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failure: non-convergent quadrature, singular normal equations,
// fits that were required to converge but did not. CLI exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace jpa
