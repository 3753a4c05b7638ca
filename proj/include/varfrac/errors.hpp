#pragma once

#include <stdexcept>
#include <string>

namespace varfrac {

// Raised when a computation cannot produce a finite answer (as opposed to
// std::invalid_argument, which signals bad input).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace varfrac
