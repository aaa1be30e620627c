#pragma once

#include <stdexcept>
#include <string>

namespace sparsedrift {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid numeric parameter (std <= 0, rate outside [0,1], non-PSD covariance, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Structurally inconsistent request (overlapping drifts, MAR without a driver, ...).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Bad observation fed to an online component (non-finite, out of range, non-binary).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Detector / ensemble / experiment misconfiguration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Failure of an imputation precondition (fully missing column, ...).
class ImputationError : public Error {
 public:
  using Error::Error;
};

/// Too few complete rows to run imputer selection.
class SelectionError : public Error {
 public:
  using Error::Error;
};

/// Member outputs not aligned on one instance index.
class SequencingError : public Error {
 public:
  using Error::Error;
};

/// Malformed file content; carries the 1-based row and column when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
      : Error(what), row_(row), column_(column) {}
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// File is readable but does not match the expected layout (empty, missing label, ...).
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace sparsedrift
