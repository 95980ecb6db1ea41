#pragma once

// Univariate real expressions f(x): parsing, evaluation, canonical text.
//
// Grammar (ASCII, whitespace-insensitive):
//
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          (right-associative)
//   primary := number | 'x' | 'e' | 'pi' | func '(' sum ')' | '(' sum ')'
//   func    := exp | ln | sqrt | sin | cos | sinh | cosh | abs
//
// `log` is rejected: its base is ambiguous, use `ln`.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hhv {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t position);
  /// Zero-based character offset into the parsed text.
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// Raised when f(x) leaves the real domain or overflows.
class EvaluationError : public std::runtime_error {
public:
  EvaluationError(const std::string& message, double x);
  double abscissa() const noexcept { return x_; }

private:
  double x_;
};

enum class NodeKind : std::uint8_t { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Builtin : std::uint8_t { Exp, Ln, Sqrt, Sin, Cos, Sinh, Cosh, Abs };

struct Node {
  NodeKind kind = NodeKind::Number;
  Builtin fn = Builtin::Exp;  // only meaningful for Call
  double value = 0.0;         // only meaningful for Number
  std::int32_t lhs = -1;      // operand of Neg/Call, left operand of binaries
  std::int32_t rhs = -1;
};

/// Immutable parsed syntax tree. Copies share the node storage.
class Expression {
public:
  /// Parses `text`; throws ParseError on syntax errors or unknown identifiers.
  static Expression parse(std::string_view text);

  /// f(x). Throws EvaluationError on a domain error or a non-finite result.
  double operator()(double x) const;

  /// Fully parenthesized canonical text; parse(to_string()) is structurally equal.
  std::string to_string() const;

  /// Node-by-node comparison; literals compare bitwise.
  bool structurally_equal(const Expression& other) const;

  const Node& root() const { return nodes_->at(static_cast<std::size_t>(root_)); }
  const Node& node(std::int32_t index) const { return nodes_->at(static_cast<std::size_t>(index)); }
  std::size_t size() const { return nodes_->size(); }

private:
  struct Program;

  Expression(std::shared_ptr<const std::vector<Node>> nodes, std::int32_t root);

  std::shared_ptr<const std::vector<Node>> nodes_;
  std::shared_ptr<const Program> program_;  // post-order copy of the tree for evaluation
  std::int32_t root_ = 0;
};

inline Expression parse(std::string_view text) { return Expression::parse(text); }
inline double evaluate(const Expression& f, double x) { return f(x); }
inline std::string serialize(const Expression& f) { return f.to_string(); }

std::string_view builtin_name(Builtin fn);

/// Shortest-safe text for a double literal: 17 significant digits.
std::string format_number(double value);

}  // namespace hhv
