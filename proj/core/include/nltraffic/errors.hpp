#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nltraffic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A velocity law produced a non-finite value or violates its declared bounds.
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

/// Caller contract broken: mismatched grids, test-function support outside
/// the data window, too few snapshots, and so on.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// The discretization could not produce an admissible step.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class CflViolation : public NumericalError {
 public:
  CflViolation(const std::string& what, double value, std::size_t cell)
      : NumericalError(what), value_(value), cell_(cell) {}
  double value() const noexcept { return value_; }
  std::size_t cell() const noexcept { return cell_; }

 private:
  double value_;
  std::size_t cell_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Configuration document rejected; carries every issue found, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& s : issues) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> issues_;
};

}  // namespace nltraffic
