#pragma once

#include <stdexcept>
#include <string>

namespace ekac {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// lo > hi, limit < 2 and similar empty inputs.
class EmptyRangeError : public Error {
 public:
  using Error::Error;
};

/// A prime table (or other precomputed resource) is too small for the query.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

/// Well-formed config text with invalid content (x < 16, odd m_max, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// B_Q vanished, so values cannot be normalized.
class ZeroVarianceError : public Error {
 public:
  using Error::Error;
};

class ConfigMismatchError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would blow up combinatorially.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace ekac
