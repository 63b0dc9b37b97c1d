#pragma once

#include <stdexcept>
#include <string>

namespace qmem {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied an argument outside the operation's domain
/// (non-unit axis, omega <= 0, K <= 1, negative density, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a trustworthy result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The 2x2 block R4 of the total propagation matrix is (near) singular.
class SingularBlockError : public NumericalError {
 public:
  SingularBlockError(double omega, double condition)
      : NumericalError("singular R4 block at omega=" + std::to_string(omega) +
                       " (condition number " + std::to_string(condition) + ")"),
        omega_(omega),
        condition_(condition) {}

  double omega() const noexcept { return omega_; }
  double condition() const noexcept { return condition_; }

 private:
  double omega_;
  double condition_;
};

/// An iterative or adaptive procedure stopped before reaching its tolerance.
class ToleranceError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmem
