#pragma once

#include <stdexcept>
#include <string>

namespace jellium {

// Every failure raised by the library derives from Error. The CLI maps
// InputError subclasses to usage failures and NumericalError subclasses to
// computation failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

#define JELLIUM_ERROR(Name, Base, tag)                              \
  class Name : public Base {                                        \
   public:                                                          \
    using Base::Base;                                               \
    const char* kind() const noexcept override { return tag; }      \
  }

JELLIUM_ERROR(DomainError, InputError, "domain");
JELLIUM_ERROR(PoleError, InputError, "pole");
JELLIUM_ERROR(RangeError, InputError, "range");
JELLIUM_ERROR(NormalizationError, InputError, "normalization");
JELLIUM_ERROR(SingularityError, InputError, "singularity");
JELLIUM_ERROR(UnsupportedError, InputError, "unsupported");

#undef JELLIUM_ERROR

// Quadrature or shell sum did not reach its target; carries the estimate
// that was achieved.
class AccuracyError : public NumericalError {
 public:
  AccuracyError(const std::string& what, double achieved)
      : NumericalError(what), achieved_(achieved) {}
  const char* kind() const noexcept override { return "accuracy"; }
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
  const char* kind() const noexcept override { return "convergence"; }
};

}  // namespace jellium
