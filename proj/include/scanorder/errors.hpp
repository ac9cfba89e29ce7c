#pragma once

#include <stdexcept>
#include <string>

namespace scanorder {

// Invalid input or configuration. The CLI maps this to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical failure inside an analysis (overflow, non-ergodic kernel,
// drift beyond tolerance). The CLI maps this to exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class RangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::size_t reached)
      : Error(what), reached_(reached) {}
  std::size_t reached() const noexcept { return reached_; }

 private:
  std::size_t reached_;
};

}  // namespace scanorder
