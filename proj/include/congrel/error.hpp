#ifndef CONGREL_ERROR_HPP
#define CONGREL_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace congrel {

/// Base class of everything the library throws.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed algebra, relation literal or other input document.
class InputError : public Error {
public:
  using Error::Error;
};

/// Operands carried over universes of different sizes.
class SizeMismatch : public Error {
public:
  SizeMismatch(std::size_t lhs, std::size_t rhs)
      : Error("relation size mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)) {}
};

/// An exhaustive driver was asked to run past its configured size bound.
class BoundExceeded : public Error {
public:
  using Error::Error;
};

/// A value does not belong to the sort an operation requires
/// (non-reflexive operand of `+`, alpha not a congruence, ...).
class SortError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

} // namespace congrel

#endif // CONGREL_ERROR_HPP
