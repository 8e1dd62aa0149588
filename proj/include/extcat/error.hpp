#pragma once

#include <stdexcept>
#include <string>

namespace extcat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an operation would produce an object outside the declared window.
class WindowOverflow : public Error {
 public:
  using Error::Error;
};

class EnumerationCapExceeded : public Error {
 public:
  using Error::Error;
};

class NoExtension : public Error {
 public:
  using Error::Error;
};

class UnknownIndec : public Error {
 public:
  using Error::Error;
};

class AnnotationMissing : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NonIntegralSolution : public Error {
 public:
  using Error::Error;
};

class NonTermination : public Error {
 public:
  using Error::Error;
};

}  // namespace extcat
