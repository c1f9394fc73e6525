#pragma once

#include <stdexcept>
#include <string>

namespace dampns {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, out-of-range parameters, malformed configuration.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Run-time numerical failure (blow-up, CFL breach, quadrature).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BlowUpError : public NumericalError {
 public:
  BlowUpError(const std::string& what, double time)
      : NumericalError(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class QuadratureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dampns
