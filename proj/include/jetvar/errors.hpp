#pragma once

#include <stdexcept>
#include <string>

namespace jetvar {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed problem text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Input leaves the supported expression class (non-affine exponent, division by a
// general expression, equation order above four, ...).
class UnsupportedForm : public Error {
 public:
  using Error::Error;
};

// A requested identity does not hold.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

// Numerical integration produced non-finite or unresolved data.
class NumericBlowUp : public Error {
 public:
  NumericBlowUp(const std::string& message, double last_valid_time)
      : Error(message), last_valid_time_(last_valid_time) {}

  double last_valid_time() const { return last_valid_time_; }

 private:
  double last_valid_time_;
};

}  // namespace jetvar
