#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace setquest {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document. `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateSetError : public ParseError {
 public:
  using ParseError::ParseError;
};

class EmptySetError : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownEntityError : public Error {
 public:
  using Error::Error;
};

/// An entity that does not split the collection where a splitting one is required.
class NonInformativeEntityError : public Error {
 public:
  using Error::Error;
};

/// Exponential or long-running computations refused by a size / node / time guard.
class GuardExceededError : public Error {
 public:
  using Error::Error;
};

class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace setquest
