#pragma once

#include <stdexcept>
#include <string>

namespace permstat {

// Base class for all errors raised by the library. The CLI maps every
// subclass to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A size parameter is out of range (N = 0, N < 2, n > N, ...).
class InvalidSize : public Error {
 public:
  using Error::Error;
};

// Arguments are individually valid but inconsistent with each other.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed or non-finite input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// The requested quantity is undefined for a degenerate input (zero variance).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// An exhaustive enumeration would exceed the configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace permstat
