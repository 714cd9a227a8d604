#pragma once

#include <stdexcept>
#include <string>

namespace spm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or orders that do not fit together (odd order, length mismatch, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numerical step could not complete: degenerate deflation, empty nullspace,
/// inconsistent rank bookkeeping, failed membership test.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, parsed, or failed validation on load.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spm
