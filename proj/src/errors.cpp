#include "levysid/errors.hpp"

namespace levysid {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig: return "config";
    case ErrorCategory::kData: return "data";
    case ErrorCategory::kInsufficientData: return "insufficient-data";
    case ErrorCategory::kNumeric: return "numeric";
    case ErrorCategory::kIo: return "io";
    case ErrorCategory::kOther: return "other";
  }
  return "other";
}

namespace {

std::string format_syntax_message(const std::string& message, std::size_t offset,
                                  const std::vector<std::string>& expected) {
  std::string out = message + " at offset " + std::to_string(offset);
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) out += i + 1 == expected.size() ? " or " : ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

}  // namespace

SyntaxError::SyntaxError(const std::string& message, std::size_t offset,
                         std::vector<std::string> expected)
    : Error(ErrorCategory::kConfig, format_syntax_message(message, offset, expected)),
      offset_(offset),
      expected_(std::move(expected)) {}

}  // namespace levysid
