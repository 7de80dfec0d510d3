#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dbp {

enum class ErrorKind {
  invalid_argument,  // precondition violated by the caller
  data,              // malformed or inconsistent input data
  not_unique,        // stationary distribution is not unique
  budget,            // oracle enumeration budget exceeded
  verification,      // an oracle comparison failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorKind::invalid_argument, what) {}
};

/// Input data error with an optional 1-based source location.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(ErrorKind::data, format(what, line, column)), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    std::string s = "line " + std::to_string(line);
    if (column != 0) s += ", column " + std::to_string(column);
    return s + ": " + what;
  }
  std::size_t line_;
  std::size_t column_;
};

/// Raised when a chain has more than one closed communicating class.
class NonUniqueStationary : public Error {
 public:
  NonUniqueStationary(const std::string& what, std::vector<std::vector<std::uint32_t>> closed_classes)
      : Error(ErrorKind::not_unique, what), closed_classes_(std::move(closed_classes)) {}
  const std::vector<std::vector<std::uint32_t>>& closed_classes() const noexcept { return closed_classes_; }

 private:
  std::vector<std::vector<std::uint32_t>> closed_classes_;
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what) : Error(ErrorKind::budget, what) {}
};

}  // namespace dbp
