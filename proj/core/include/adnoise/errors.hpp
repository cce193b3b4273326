#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace adnoise {

// Base type for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unit conversion between incompatible dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Bad precondition / constructor argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Evaluation outside a model's domain (tabulated data without a tail, etc).
class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

// File-format problems; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0)
      : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Eigensolve / null-space / convergence failures.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Fewer bound levels than the downstream fluctuator needs.
class InsufficientBoundStates : public Error {
 public:
  using Error::Error;
};

// Every level pair sits outside the phonon density-of-states support.
class PhononSilentError : public Error {
 public:
  using Error::Error;
};

// Scenario validation: all problems reported at once.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& ps) {
    std::string out = "scenario validation failed:";
    for (const auto& p : ps) out += "\n  - " + p;
    return out;
  }
  std::vector<std::string> problems_;
};

}  // namespace adnoise
