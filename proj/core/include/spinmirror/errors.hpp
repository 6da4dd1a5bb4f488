#pragma once

#include <stdexcept>

namespace spinmirror {

/// Input rejected before any computation took place.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not reach its stated tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinmirror
