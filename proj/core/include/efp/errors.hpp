#pragma once

#include <stdexcept>
#include <string>

namespace efp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not fit the operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Elimination hit a pivot below the relative singularity threshold.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// A scalar or structural argument is outside its legal domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed text, JSON or snapshot input.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A ledger operation was rejected; ledger state is unchanged.
class LedgerError : public Error {
 public:
  using Error::Error;
};

}  // namespace efp
