#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace levysid {

/// Coarse error classes. The CLI maps each one onto a distinct exit code.
enum class ErrorCategory {
  kConfig,
  kData,
  kInsufficientData,
  kNumeric,
  kIo,
  kOther,
};

std::string_view category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Mathematical domain violation (bad parameter, singular kernel point,
/// division by zero during expression evaluation, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error(ErrorCategory::kNumeric, message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorCategory::kConfig, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorCategory::kData, message) {}
};

class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& message)
      : Error(ErrorCategory::kInsufficientData, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorCategory::kIo, message) {}
};

class RankDeficientError : public Error {
 public:
  RankDeficientError(const std::string& message, double condition)
      : Error(ErrorCategory::kNumeric, message), condition_(condition) {}

  /// Estimated 2-norm condition number of the design matrix.
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Expression syntax error. `offset` is the 0-based byte offset of the
/// offending token in the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t offset,
              std::vector<std::string> expected);

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownVariableError : public SyntaxError {
 public:
  UnknownVariableError(const std::string& message, std::size_t offset)
      : SyntaxError(message, offset, {}) {}
};

class UnknownFunctionError : public SyntaxError {
 public:
  UnknownFunctionError(const std::string& message, std::size_t offset)
      : SyntaxError(message, offset, {}) {}
};

/// Collects non-fatal estimator warnings (clamped α̂, skipped bins,
/// conditioning fallbacks) in emission order.
class Diagnostics {
 public:
  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  bool empty() const noexcept { return warnings_.empty(); }

 private:
  std::vector<std::string> warnings_;
};

}  // namespace levysid
