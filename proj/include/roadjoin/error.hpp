#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roadjoin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Input is well formed but references something that does not exist.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Hierarchy file has the wrong version or is corrupted.
class FormatError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace roadjoin
