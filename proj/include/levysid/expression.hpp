#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace levysid {

enum class NodeKind : std::uint8_t {
  kConstant,
  kVariable,
  kNegate,
  kAdd,
  kSubtract,
  kMultiply,
  kDivide,
  kPower,
  kCall,
};

enum class MathFunction : std::uint8_t { kSin, kCos, kTan, kTanh, kExp, kLn, kSqrt, kAbs };

std::string_view function_name(MathFunction fn);

struct ExpressionNode {
  NodeKind kind = NodeKind::kConstant;
  MathFunction function = MathFunction::kSin;
  std::uint32_t variable = 0;  // 0-based coordinate index
  double value = 0.0;

  friend bool operator==(const ExpressionNode&, const ExpressionNode&) = default;
};

/// Immutable arithmetic expression over variables x1..xn.
///
/// Grammar (LL(1)):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | 'x'<k> | func '(' expr ')' | '(' expr ')'
///
/// `^` binds tighter than unary minus and is right-associative, so
/// `-x1^2^3` reads as `-(x1^(2^3))`. Implicit multiplication is rejected.
///
/// The tree is stored flattened in postfix order and shared between copies.
class Expression {
 public:
  /// Throws SyntaxError (with byte offset), UnknownVariableError or
  /// UnknownFunctionError.
  static Expression parse(std::string_view text, std::size_t dimension);

  /// Evaluates at `point` (size must equal dimension()). Domain violations
  /// (division by zero, even root or log out of domain, non-finite results)
  /// throw DomainError instead of returning NaN.
  double evaluate(std::span<const double> point) const;

  /// Canonical fully parenthesised form; parse(to_string()) reproduces the
  /// same node sequence.
  std::string to_string() const;

  std::size_t dimension() const noexcept;
  std::span<const ExpressionNode> nodes() const noexcept;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  struct Program;
  explicit Expression(std::shared_ptr<const Program> program) : program_(std::move(program)) {}

  std::shared_ptr<const Program> program_;
};

}  // namespace levysid
