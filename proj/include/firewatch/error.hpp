#pragma once

#include <stdexcept>
#include <string>

namespace firewatch {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on caller-supplied data was violated (dimension mismatch,
/// non-finite value, empty input, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Training cannot start (e.g. only one class present).
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration: fractions that do not sum to one, unwritable output, ...
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed CSV or model file. The message names the row and column.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Network failure while talking to a device. Retryable.
class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace firewatch
