#pragma once

#include <stdexcept>
#include <string>

namespace netent {

// Bad user input: malformed graph, parameter out of range, unknown symbol.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parse failure in a text input, carrying the 1-based line number.
class ParseError : public ValidationError {
 public:
  ParseError(int line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

// A numerical invariant was violated during a computation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netent
