#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace egoexo {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violated a documented invariant (non-orthonormal rotation,
/// image size mismatch, out-of-range parameter).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Geometry input is degenerate (too few points, collinear configuration,
/// rank-deficient system).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// An operation needed data that is not there yet (empty buffer, no pairs).
class NoDataError : public Error {
 public:
  using Error::Error;
};

/// A text input could not be parsed. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Wire-level framing or message validation failure.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace egoexo
