#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ik {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched lengths or shapes between arguments.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameter values or configuration documents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Outside the domain where a closed form is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// API misuse, e.g. a backward pass without a matching forward pass.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values encountered during optimization.
class NumericError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Row and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : Error(what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace ik
