#pragma once

#include <stdexcept>
#include <string>

namespace reactsyn {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (spec files, programs, automata, DIMACS).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Failure of an external solver process, or an unusable solver answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace reactsyn
