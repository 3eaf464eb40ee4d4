#pragma once

#include <stdexcept>
#include <string>

namespace qtr {

/// Invalid physical or simulation parameter, or a malformed configuration.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed its own convergence check.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too few observed events for a statistically meaningful estimate.
class StatisticalFloorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qtr
