#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace windatlas {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A required column is absent or a header is malformed.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A data row could not be interpreted. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input violates a domain invariant (negative capacity, unsorted knots, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace windatlas
