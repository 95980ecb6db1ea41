#include "hhv/expr.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <utility>

namespace hhv {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error("syntax error at position " + std::to_string(position) + ": " + message),
      position_(position) {}

EvaluationError::EvaluationError(const std::string& message, double x)
    : std::runtime_error(message + " at x = " + format_number(x)), x_(x) {}

namespace {

constexpr std::array<std::pair<std::string_view, Builtin>, 8> kBuiltins{{
    {"exp", Builtin::Exp},
    {"ln", Builtin::Ln},
    {"sqrt", Builtin::Sqrt},
    {"sin", Builtin::Sin},
    {"cos", Builtin::Cos},
    {"sinh", Builtin::Sinh},
    {"cosh", Builtin::Cosh},
    {"abs", Builtin::Abs},
}};

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::pair<std::vector<Node>, std::int32_t> run() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    std::int32_t root = sum();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return {std::move(nodes_), root};
  }

private:
  std::int32_t push(Node n) {
    nodes_.push_back(n);
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  std::int32_t binary(NodeKind kind, std::int32_t lhs, std::int32_t rhs) {
    Node n;
    n.kind = kind;
    n.lhs = lhs;
    n.rhs = rhs;
    return push(n);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ == text_.size()) throw ParseError(std::string("expected '") + c + "' before end of input", pos_);
      throw ParseError(std::string("expected '") + c + "', found '" + text_[pos_] + "'", pos_);
    }
  }

  std::int32_t sum() {
    std::int32_t lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = binary(NodeKind::Add, lhs, product());
      } else if (accept('-')) {
        lhs = binary(NodeKind::Sub, lhs, product());
      } else {
        return lhs;
      }
    }
  }

  std::int32_t product() {
    std::int32_t lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(NodeKind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = binary(NodeKind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  std::int32_t unary() {
    if (accept('-')) {
      Node n;
      n.kind = NodeKind::Neg;
      n.lhs = unary();
      return push(n);
    }
    return power();
  }

  std::int32_t power() {
    std::int32_t base = primary();
    if (accept('^')) return binary(NodeKind::Pow, base, unary());
    return base;
  }

  std::int32_t primary() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (accept('(')) {
      std::int32_t inner = sum();
      expect(')');
      return inner;
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  std::int32_t number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      // Only an exponent if digits follow; otherwise "2e" would swallow the constant e.
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    const std::string literal(text_.substr(start, pos_ - start));
    const double value = std::strtod(literal.c_str(), nullptr);
    if (!std::isfinite(value)) throw ParseError("numeric literal out of range", start);
    Node n;
    n.kind = NodeKind::Number;
    n.value = value;
    return push(n);
  }

  std::int32_t identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (name == "x") {
      Node n;
      n.kind = NodeKind::Variable;
      return push(n);
    }
    if (name == "e" || name == "pi") {
      Node n;
      n.kind = NodeKind::Number;
      n.value = name == "e" ? std::numbers::e : std::numbers::pi;
      return push(n);
    }
    if (name == "log") throw ParseError("'log' is ambiguous, use 'ln' for the natural logarithm", start);
    for (const auto& [builtin, fn] : kBuiltins) {
      if (name != builtin) continue;
      expect('(');
      Node n;
      n.kind = NodeKind::Call;
      n.fn = fn;
      n.lhs = sum();
      expect(')');
      return push(n);
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<Node> nodes_;
};

// Binary powering; exact for squares.
double integer_power(double base, double exponent) {
  auto n = static_cast<unsigned>(std::fabs(exponent));
  double result = 1.0;
  double b = base;
  while (n != 0) {
    if (n & 1u) result *= b;
    n >>= 1;
    if (n != 0) b *= b;
  }
  return exponent < 0.0 ? 1.0 / result : result;
}

double apply_binary(NodeKind kind, double lhs, double rhs, double x) {
  double r = 0.0;
  switch (kind) {
    case NodeKind::Add: r = lhs + rhs; break;
    case NodeKind::Sub: r = lhs - rhs; break;
    case NodeKind::Mul: r = lhs * rhs; break;
    case NodeKind::Div:
      if (rhs == 0.0) throw EvaluationError("division by zero", x);
      r = lhs / rhs;
      break;
    case NodeKind::Pow:
      if (lhs < 0.0 && std::trunc(rhs) != rhs) throw EvaluationError("negative base raised to a non-integer power", x);
      if (lhs == 0.0 && rhs < 0.0) throw EvaluationError("zero raised to a negative power", x);
      r = std::fabs(rhs) <= 16.0 && std::trunc(rhs) == rhs ? integer_power(lhs, rhs) : std::pow(lhs, rhs);
      break;
    default: break;
  }
  if (!std::isfinite(r)) throw EvaluationError("non-finite result", x);
  return r;
}

double apply_call(Builtin fn, double arg, double x) {
  double r = 0.0;
  switch (fn) {
    case Builtin::Exp: r = std::exp(arg); break;
    case Builtin::Ln:
      if (arg <= 0.0) throw EvaluationError("ln of non-positive value", x);
      r = std::log(arg);
      break;
    case Builtin::Sqrt:
      if (arg < 0.0) throw EvaluationError("sqrt of negative value", x);
      r = std::sqrt(arg);
      break;
    case Builtin::Sin: r = std::sin(arg); break;
    case Builtin::Cos: r = std::cos(arg); break;
    case Builtin::Sinh: r = std::sinh(arg); break;
    case Builtin::Cosh: r = std::cosh(arg); break;
    case Builtin::Abs: r = std::fabs(arg); break;
  }
  if (!std::isfinite(r)) throw EvaluationError("non-finite result", x);
  return r;
}

char op_symbol(NodeKind kind) {
  switch (kind) {
    case NodeKind::Add: return '+';
    case NodeKind::Sub: return '-';
    case NodeKind::Mul: return '*';
    case NodeKind::Div: return '/';
    case NodeKind::Pow: return '^';
    default: return '?';
  }
}

void write_node(const Expression& f, std::int32_t index, std::string& out) {
  const Node& n = f.node(index);
  switch (n.kind) {
    case NodeKind::Number:
      out += format_number(n.value);
      return;
    case NodeKind::Variable:
      out += 'x';
      return;
    case NodeKind::Neg:
      out += "(-";
      write_node(f, n.lhs, out);
      out += ')';
      return;
    case NodeKind::Call:
      out += builtin_name(n.fn);
      out += '(';
      write_node(f, n.lhs, out);
      out += ')';
      return;
    default:
      out += '(';
      write_node(f, n.lhs, out);
      out += op_symbol(n.kind);
      write_node(f, n.rhs, out);
      out += ')';
      return;
  }
}

bool equal_nodes(const Expression& f, std::int32_t i, const Expression& g, std::int32_t j) {
  const Node& a = f.node(i);
  const Node& b = g.node(j);
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Number:
      return std::bit_cast<std::uint64_t>(a.value) == std::bit_cast<std::uint64_t>(b.value);
    case NodeKind::Variable:
      return true;
    case NodeKind::Neg:
      return equal_nodes(f, a.lhs, g, b.lhs);
    case NodeKind::Call:
      return a.fn == b.fn && equal_nodes(f, a.lhs, g, b.lhs);
    default:
      return equal_nodes(f, a.lhs, g, b.lhs) && equal_nodes(f, a.rhs, g, b.rhs);
  }
}

}  // namespace

struct Expression::Program {
  std::vector<Node> ops;  // post-order; operands precede their operator
  std::size_t max_depth = 0;
};

namespace {

std::size_t emit_postfix(const std::vector<Node>& nodes, std::int32_t index, std::vector<Node>& ops) {
  const Node& n = nodes[static_cast<std::size_t>(index)];
  std::size_t depth = 1;
  switch (n.kind) {
    case NodeKind::Number:
    case NodeKind::Variable:
      break;
    case NodeKind::Neg:
    case NodeKind::Call:
      depth = emit_postfix(nodes, n.lhs, ops);
      break;
    default:
    {
      const std::size_t left = emit_postfix(nodes, n.lhs, ops);
      const std::size_t right = emit_postfix(nodes, n.rhs, ops);
      depth = std::max(left, right + 1);
      break;
    }
  }
  ops.push_back(n);
  return depth;
}

}  // namespace

Expression::Expression(std::shared_ptr<const std::vector<Node>> nodes, std::int32_t root)
    : nodes_(std::move(nodes)), root_(root) {
  auto program = std::make_shared<Program>();
  program->max_depth = emit_postfix(*nodes_, root_, program->ops);
  program_ = std::move(program);
}

Expression Expression::parse(std::string_view text) {
  auto [nodes, root] = Parser(text).run();
  return Expression(std::make_shared<const std::vector<Node>>(std::move(nodes)), root);
}

double Expression::operator()(double x) const {
  if (!std::isfinite(x)) throw EvaluationError("non-finite argument", x);
  constexpr std::size_t kInline = 32;
  double inline_stack[kInline];
  std::vector<double> heap_stack;
  double* stack = inline_stack;
  if (program_->max_depth > kInline) {
    heap_stack.resize(program_->max_depth);
    stack = heap_stack.data();
  }
  std::size_t top = 0;  // number of occupied slots
  for (const Node& op : program_->ops) {
    switch (op.kind) {
      case NodeKind::Number: stack[top++] = op.value; break;
      case NodeKind::Variable: stack[top++] = x; break;
      case NodeKind::Neg: stack[top - 1] = -stack[top - 1]; break;
      case NodeKind::Call: stack[top - 1] = apply_call(op.fn, stack[top - 1], x); break;
      default:
        --top;
        stack[top - 1] = apply_binary(op.kind, stack[top - 1], stack[top], x);
        break;
    }
  }
  return stack[0];
}

std::string Expression::to_string() const {
  std::string out;
  write_node(*this, root_, out);
  return out;
}

bool Expression::structurally_equal(const Expression& other) const {
  return equal_nodes(*this, root_, other, other.root_);
}

std::string_view builtin_name(Builtin fn) {
  for (const auto& [name, b] : kBuiltins)
    if (b == fn) return name;
  return "?";
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace hhv
