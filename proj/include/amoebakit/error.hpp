#pragma once

#include <stdexcept>
#include <string>

namespace amoebakit {

/// Base of every error raised by the library. `exit_code()` is the process
/// status the command-line front end reports for it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 2; }
};

/// Malformed input, bad arguments, missing files.
class UsageError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 1; }
};

/// Argument outside the domain of a mathematical operation (e.g. a zero
/// coordinate passed to a Laurent polynomial).
class DomainError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 1; }
};

/// Precision or conditioning failure of a numerical kernel.
class NumericError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Input is degenerate for the requested computation.
class DegenerateError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

}  // namespace amoebakit
