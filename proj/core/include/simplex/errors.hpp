#pragma once

#include <stdexcept>
#include <string>

namespace simplex {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or dimensionality mismatch between arguments.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Geometric degeneracy: zero-volume simplex, coincident data, or a
/// nullspace that is empty or not one-dimensional.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the operation's domain (too few points, bad counts,
/// out-of-range targets).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested an operation the configuration cannot support, e.g. the
/// derivative of the hard indicator loss.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// File could not be read, written, or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace simplex
