#pragma once

#include <stdexcept>
#include <string>

namespace mpm {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sizes, dimensions or axis sets that do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A structural hypothesis (refinement, F4 commutation) does not hold.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invariant-violating data, typically from a file.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Construction would exceed the configured outcome cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Incompatible options or missing configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Scalar argument outside its domain (negative threshold, p <= 0, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpm
