#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gces {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Bad argument or configuration: non-positive step, negative strong
/// convexity, gamma0 outside the admissible set, ...
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The solver state cannot be advanced (zero weights, non-finite iterate).
class DegenerateState : public Error {
 public:
  using Error::Error;
};

class LineSearchFailure : public Error {
 public:
  using Error::Error;
};

class NotImplemented : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class RegistryError : public Error {
 public:
  using Error::Error;
};

class FetchError : public Error {
 public:
  using Error::Error;
};

class IntegrityError : public Error {
 public:
  using Error::Error;
};

class ReferenceFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace gces
