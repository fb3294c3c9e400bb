#pragma once

#include <stdexcept>
#include <string>

namespace eqcap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numeric or exact certificate did not hold.
class CertificationFailure : public Error {
 public:
  using Error::Error;
};

/// An iterative method or adaptive quadrature did not converge.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace detail
}  // namespace eqcap
