#pragma once

#include <stdexcept>
#include <string>

namespace cosfit {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition (bad degree, length mismatch, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input data is malformed or inconsistent (parse errors, duplicate points, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure failed (breakdown, rank deficiency, failed self-check).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cosfit
