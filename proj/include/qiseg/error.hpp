#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qiseg {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument: out-of-range qubit, overlapping registers, invalid config.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A backend was handed a circuit outside the class it can simulate.
class UnsupportedCircuit : public Error {
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

}  // namespace qiseg
