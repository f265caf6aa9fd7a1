#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace levybound {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A distribution or configuration parameter lies outside its legal set.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A mathematical function was evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Binary container is malformed. `field()` names the offending field.
class FormatError : public Error {
 public:
  FormatError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Text input could not be parsed. `line()` is 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Input data does not satisfy an analysis procedure's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An invariant that should hold by construction was violated.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace levybound
