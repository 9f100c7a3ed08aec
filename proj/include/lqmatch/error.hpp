#pragma once

#include <stdexcept>
#include <string>

namespace lqmatch {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Positions are 1-based.
class ParseError : public Error {
public:
  ParseError(int line, int col, const std::string& msg)
      : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

private:
  int line_;
  int col_;
};

// Structurally invalid instance or matching.
class ValidationError : public Error {
public:
  using Error::Error;
};

// An operation was invoked outside its contract (wrong instance class,
// missing feasible matching, non-minimal input matching, cap exceeded, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

// The assignment-enumeration budget given to a solver ran out.
class BudgetExceededError : public Error {
public:
  using Error::Error;
};

}  // namespace lqmatch
