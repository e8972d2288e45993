#pragma once

#include <stdexcept>
#include <string>

namespace pdist {

/// Raised when a value cannot be built (structurally zero divisor, duplicate
/// breakpoints, shape mismatch, ...).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an expression is evaluated at a pole.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature or integrator failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input (problem files, JSON documents, CLI arguments).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& detail, int line, int column)
      : InputError("syntax error at line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ": " + detail),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace pdist
