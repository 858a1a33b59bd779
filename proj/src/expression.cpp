#include "levysid/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

#include "levysid/errors.hpp"

namespace levysid {

struct Expression::Program {
  std::vector<ExpressionNode> nodes;
  std::size_t dimension = 0;
  std::size_t max_stack = 0;
};

std::string_view function_name(MathFunction fn) {
  switch (fn) {
    case MathFunction::kSin: return "sin";
    case MathFunction::kCos: return "cos";
    case MathFunction::kTan: return "tan";
    case MathFunction::kTanh: return "tanh";
    case MathFunction::kExp: return "exp";
    case MathFunction::kLn: return "ln";
    case MathFunction::kSqrt: return "sqrt";
    case MathFunction::kAbs: return "abs";
  }
  return "?";
}

namespace {

constexpr std::array kFunctions = {MathFunction::kSin,  MathFunction::kCos, MathFunction::kTan,
                                   MathFunction::kTanh, MathFunction::kExp, MathFunction::kLn,
                                   MathFunction::kSqrt, MathFunction::kAbs};

std::optional<MathFunction> lookup_function(std::string_view name) {
  for (MathFunction fn : kFunctions) {
    if (function_name(fn) == name) return fn;
  }
  return std::nullopt;
}

enum class TokenKind { kNumber, kIdentifier, kPlus, kMinus, kStar, kSlash, kCaret, kLParen, kRParen, kEnd };

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::size_t offset = 0;
  std::string_view text;
  double number = 0.0;
};

const std::vector<std::string> kOperandStart = {"number", "variable", "function", "'('", "'-'"};
const std::vector<std::string> kAfterOperand = {"operator", "')'", "end of input"};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Token tok;
    tok.offset = pos_;
    if (pos_ >= text_.size()) return tok;

    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_ + 1;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
        ++end;
      }
      tok.kind = TokenKind::kIdentifier;
      tok.text = text_.substr(pos_, end - pos_);
      pos_ = end;
      return tok;
    }
    switch (c) {
      case '+': tok.kind = TokenKind::kPlus; break;
      case '-': tok.kind = TokenKind::kMinus; break;
      case '*': tok.kind = TokenKind::kStar; break;
      case '/': tok.kind = TokenKind::kSlash; break;
      case '^': tok.kind = TokenKind::kCaret; break;
      case '(': tok.kind = TokenKind::kLParen; break;
      case ')': tok.kind = TokenKind::kRParen; break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_, {});
    }
    tok.text = text_.substr(pos_, 1);
    ++pos_;
    return tok;
  }

 private:
  Token lex_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++count;
      }
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw SyntaxError("malformed number", start, {"digit"});
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t probe = pos_ + 1;
      if (probe < text_.size() && (text_[probe] == '+' || text_[probe] == '-')) ++probe;
      if (probe < text_.size() && std::isdigit(static_cast<unsigned char>(text_[probe]))) {
        pos_ = probe;
        digits();
      }
    }
    Token tok;
    tok.kind = TokenKind::kNumber;
    tok.offset = start;
    tok.text = text_.substr(start, pos_ - start);
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    auto [ptr, ec] = std::from_chars(first, last, tok.number);
    if (ec != std::errc{} || ptr != last || !std::isfinite(tok.number)) {
      throw SyntaxError("number out of range", start, {});
    }
    return tok;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view text, std::size_t dimension) : lexer_(text), dimension_(dimension) {
    advance();
  }

  std::vector<ExpressionNode> run() {
    parse_expr();
    if (current_.kind != TokenKind::kEnd) {
      throw SyntaxError("unexpected '" + std::string(current_.text) + "'", current_.offset,
                        kAfterOperand);
    }
    return std::move(out_);
  }

 private:
  void advance() { current_ = lexer_.next(); }

  void emit(NodeKind kind) {
    ExpressionNode node;
    node.kind = kind;
    out_.push_back(node);
  }

  void parse_expr() {
    parse_term();
    while (current_.kind == TokenKind::kPlus || current_.kind == TokenKind::kMinus) {
      const NodeKind op = current_.kind == TokenKind::kPlus ? NodeKind::kAdd : NodeKind::kSubtract;
      advance();
      parse_term();
      emit(op);
    }
  }

  void parse_term() {
    parse_unary();
    while (current_.kind == TokenKind::kStar || current_.kind == TokenKind::kSlash) {
      const NodeKind op = current_.kind == TokenKind::kStar ? NodeKind::kMultiply : NodeKind::kDivide;
      advance();
      parse_unary();
      emit(op);
    }
  }

  void parse_unary() {
    if (current_.kind == TokenKind::kMinus) {
      advance();
      parse_unary();
      emit(NodeKind::kNegate);
      return;
    }
    parse_power();
  }

  void parse_power() {
    parse_primary();
    if (current_.kind == TokenKind::kCaret) {
      advance();
      parse_unary();
      emit(NodeKind::kPower);
    }
  }

  void expect_rparen() {
    if (current_.kind != TokenKind::kRParen) {
      throw SyntaxError(current_.kind == TokenKind::kEnd
                            ? std::string("unexpected end of input")
                            : "unexpected '" + std::string(current_.text) + "'",
                        current_.offset, {"operator", "')'"});
    }
    advance();
  }

  void parse_primary() {
    const Token tok = current_;
    switch (tok.kind) {
      case TokenKind::kNumber: {
        ExpressionNode node;
        node.kind = NodeKind::kConstant;
        node.value = tok.number;
        out_.push_back(node);
        advance();
        return;
      }
      case TokenKind::kLParen:
        advance();
        parse_expr();
        expect_rparen();
        return;
      case TokenKind::kIdentifier:
        parse_identifier(tok);
        return;
      case TokenKind::kEnd:
        throw SyntaxError("unexpected end of input", tok.offset, kOperandStart);
      default:
        throw SyntaxError("unexpected '" + std::string(tok.text) + "'", tok.offset, kOperandStart);
    }
  }

  void parse_identifier(const Token& tok) {
    advance();
    if (current_.kind == TokenKind::kLParen) {
      const auto fn = lookup_function(tok.text);
      if (!fn) {
        throw UnknownFunctionError("unknown function '" + std::string(tok.text) + "'", tok.offset);
      }
      advance();
      parse_expr();
      expect_rparen();
      ExpressionNode node;
      node.kind = NodeKind::kCall;
      node.function = *fn;
      out_.push_back(node);
      return;
    }
    if (lookup_function(tok.text)) {
      throw SyntaxError("function '" + std::string(tok.text) + "' needs an argument list",
                        current_.offset, {"'('"});
    }
    std::size_t index = 0;
    const std::string_view name = tok.text;
    bool is_variable = name.size() >= 2 && name[0] == 'x';
    if (is_variable) {
      auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      is_variable = ec == std::errc{} && ptr == name.data() + name.size();
    }
    if (!is_variable) {
      throw UnknownVariableError("unknown identifier '" + std::string(name) + "'", tok.offset);
    }
    if (index < 1 || index > dimension_) {
      throw UnknownVariableError("variable '" + std::string(name) + "' outside dimension " +
                                     std::to_string(dimension_),
                                 tok.offset);
    }
    ExpressionNode node;
    node.kind = NodeKind::kVariable;
    node.variable = static_cast<std::uint32_t>(index - 1);
    out_.push_back(node);
  }

  Lexer lexer_;
  std::size_t dimension_;
  Token current_;
  std::vector<ExpressionNode> out_;
};

int arity(NodeKind kind) {
  switch (kind) {
    case NodeKind::kConstant:
    case NodeKind::kVariable: return 0;
    case NodeKind::kNegate:
    case NodeKind::kCall: return 1;
    default: return 2;
  }
}

double apply_function(MathFunction fn, double x) {
  switch (fn) {
    case MathFunction::kSin: return std::sin(x);
    case MathFunction::kCos: return std::cos(x);
    case MathFunction::kTan: return std::tan(x);
    case MathFunction::kTanh: return std::tanh(x);
    case MathFunction::kExp: return std::exp(x);
    case MathFunction::kLn:
      if (!(x > 0.0)) throw DomainError("logarithm of non-positive value");
      return std::log(x);
    case MathFunction::kSqrt:
      if (x < 0.0) throw DomainError("square root of negative value");
      return std::sqrt(x);
    case MathFunction::kAbs: return std::abs(x);
  }
  return x;
}

double apply_power(double base, double exponent) {
  if (exponent == 2.0) return base * base;
  if (base == 0.0 && exponent < 0.0) throw DomainError("division by zero in power");
  if (base < 0.0 && exponent != std::trunc(exponent)) {
    throw DomainError("fractional power of negative value");
  }
  return std::pow(base, exponent);
}

std::string format_number(double value) {
  std::array<char, 32> buffer{};
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

std::string_view operator_symbol(NodeKind kind) {
  switch (kind) {
    case NodeKind::kAdd: return " + ";
    case NodeKind::kSubtract: return " - ";
    case NodeKind::kMultiply: return " * ";
    case NodeKind::kDivide: return " / ";
    case NodeKind::kPower: return "^";
    default: return "";
  }
}

}  // namespace

Expression Expression::parse(std::string_view text, std::size_t dimension) {
  if (dimension == 0) throw ConfigError("expression dimension must be at least 1");
  auto program = std::make_shared<Program>();
  program->nodes = Parser(text, dimension).run();
  program->dimension = dimension;
  std::size_t depth = 0;
  for (const auto& node : program->nodes) {
    depth = depth + 1 - static_cast<std::size_t>(arity(node.kind));
    program->max_stack = std::max(program->max_stack, depth);
  }
  return Expression(std::move(program));
}

double Expression::evaluate(std::span<const double> point) const {
  const Program& prog = *program_;
  if (point.size() != prog.dimension) {
    throw DomainError("expression expects a point of dimension " + std::to_string(prog.dimension) +
                      ", got " + std::to_string(point.size()));
  }
  constexpr std::size_t kInlineStack = 32;
  std::array<double, kInlineStack> inline_stack{};
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (prog.max_stack > kInlineStack) {
    heap_stack.resize(prog.max_stack);
    stack = heap_stack.data();
  }

  std::size_t top = 0;
  for (const ExpressionNode& node : prog.nodes) {
    switch (node.kind) {
      case NodeKind::kConstant: stack[top++] = node.value; break;
      case NodeKind::kVariable: stack[top++] = point[node.variable]; break;
      case NodeKind::kNegate: stack[top - 1] = -stack[top - 1]; break;
      case NodeKind::kCall: stack[top - 1] = apply_function(node.function, stack[top - 1]); break;
      case NodeKind::kAdd: --top; stack[top - 1] += stack[top]; break;
      case NodeKind::kSubtract: --top; stack[top - 1] -= stack[top]; break;
      case NodeKind::kMultiply: --top; stack[top - 1] *= stack[top]; break;
      case NodeKind::kDivide:
        --top;
        if (stack[top] == 0.0) throw DomainError("division by zero");
        stack[top - 1] /= stack[top];
        break;
      case NodeKind::kPower:
        --top;
        stack[top - 1] = apply_power(stack[top - 1], stack[top]);
        break;
    }
  }
  const double result = stack[0];
  if (!std::isfinite(result)) throw DomainError("expression evaluated to a non-finite value");
  return result;
}

std::string Expression::to_string() const {
  std::vector<std::string> stack;
  for (const ExpressionNode& node : program_->nodes) {
    switch (node.kind) {
      case NodeKind::kConstant: stack.push_back(format_number(node.value)); break;
      case NodeKind::kVariable: stack.push_back("x" + std::to_string(node.variable + 1)); break;
      case NodeKind::kNegate: stack.back() = "(-" + stack.back() + ")"; break;
      case NodeKind::kCall:
        stack.back() = std::string(function_name(node.function)) + "(" + stack.back() + ")";
        break;
      default: {
        std::string rhs = std::move(stack.back());
        stack.pop_back();
        stack.back() = "(" + stack.back() + std::string(operator_symbol(node.kind)) + rhs + ")";
      }
    }
  }
  return stack.empty() ? std::string() : stack.back();
}

std::size_t Expression::dimension() const noexcept { return program_->dimension; }

std::span<const ExpressionNode> Expression::nodes() const noexcept { return program_->nodes; }

bool operator==(const Expression& a, const Expression& b) {
  return a.program_->dimension == b.program_->dimension && a.program_->nodes == b.program_->nodes;
}

}  // namespace levysid
