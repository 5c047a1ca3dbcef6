#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace condbayes {

// Root of every error the library throws. The CLI maps subclasses onto exit
// codes, so keep the hierarchy flat and meaningful.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that violates the specification DSL or a file format. Exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public InputError {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : InputError("syntax error at " + std::to_string(line) + ":" +
                   std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

class FormatError : public InputError {
 public:
  using InputError::InputError;
};

class EmptyTraceError : public InputError {
 public:
  using InputError::InputError;
};

// A variable that mixes numeric and string observations.
class TypeConflictError : public InputError {
 public:
  using InputError::InputError;
};

// A predicate kind applied to a value of the wrong type.
class TypeMismatchError : public InputError {
 public:
  using InputError::InputError;
};

// A trace lacks a variable the specification needs.
class TraceMismatchError : public InputError {
 public:
  using InputError::InputError;
};

class SpaceTooLargeError : public Error {
 public:
  SpaceTooLargeError(std::size_t estimate, std::size_t cap)
      : Error("candidate space too large: " + std::to_string(estimate) +
              " candidates exceeds cap " + std::to_string(cap)),
        estimate_(estimate),
        cap_(cap) {}

  std::size_t estimate() const noexcept { return estimate_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t estimate_;
  std::size_t cap_;
};

class SessionError : public Error {
 public:
  using Error::Error;
};

}  // namespace condbayes
