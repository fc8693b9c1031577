#include "isoembed/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace isoembed::expr {

namespace {

const Expr& zero_literal() {
  static const Expr zero = Expr::number(0.0);
  return zero;
}

bool is_literal(const Expr& e, double v) { return e.is_number() && e.value() == v; }

const char* function_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    default: return "?";
  }
}

const char* binary_symbol(Op op) {
  switch (op) {
    case Op::Add: return " + ";
    case Op::Sub: return " - ";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Pow: return "^";
    default: return "?";
  }
}

// Folding constructors used by differentiate.
Expr add(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) return Expr::number(a.value() + b.value());
  if (is_literal(a, 0.0)) return b;
  if (is_literal(b, 0.0)) return a;
  return Expr::binary(Op::Add, a, b);
}

Expr neg(const Expr& a) { return Expr::unary(Op::Neg, a); }

Expr sub(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) return Expr::number(a.value() - b.value());
  if (is_literal(b, 0.0)) return a;
  if (is_literal(a, 0.0)) return neg(b);
  return Expr::binary(Op::Sub, a, b);
}

Expr mul(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) return Expr::number(a.value() * b.value());
  if (is_literal(a, 0.0) || is_literal(b, 0.0)) return zero_literal();
  if (is_literal(a, 1.0)) return b;
  if (is_literal(b, 1.0)) return a;
  return Expr::binary(Op::Mul, a, b);
}

Expr div(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number() && b.value() != 0.0)
    return Expr::number(a.value() / b.value());
  if (is_literal(a, 0.0)) return zero_literal();
  if (is_literal(b, 1.0)) return a;
  return Expr::binary(Op::Div, a, b);
}

Expr pow(const Expr& a, const Expr& b) {
  if (is_literal(b, 1.0)) return a;
  if (is_literal(b, 0.0)) return Expr::number(1.0);
  if (a.is_number() && b.is_number()) {
    const double v = std::pow(a.value(), b.value());
    if (std::isfinite(v)) return Expr::number(v);
  }
  return Expr::binary(Op::Pow, a, b);
}

class Parser {
 public:
  Parser(std::string_view text, int n) : text_(text), n_(n) {}

  Expr parse_all() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    Expr e = parse_sum();
    skip_space();
    if (pos_ != text_.size())
      throw ParseError(fmt::format("unexpected '{}'", text_[pos_]), pos_);
    return e;
  }

 private:
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
      if (pos_ >= text_.size())
        throw ParseError(fmt::format("expected '{}' but input ended", c), pos_);
      throw ParseError(fmt::format("expected '{}'", c), pos_);
    }
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Op::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = Expr::binary(Op::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_product() {
    Expr lhs = parse_power();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Op::Mul, lhs, parse_power());
      } else if (accept('/')) {
        lhs = Expr::binary(Op::Div, lhs, parse_power());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_power() {
    Expr lhs = parse_unary();
    while (accept('^')) lhs = Expr::binary(Op::Pow, lhs, parse_unary());
    return lhs;
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::unary(Op::Neg, parse_unary());
    return parse_primary();
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    throw ParseError(fmt::format("unexpected '{}'", c), pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    std::string buffer(text_.substr(pos_));
    char* end = nullptr;
    const double value = std::strtod(buffer.c_str(), &end);
    const auto consumed = static_cast<std::size_t>(end - buffer.c_str());
    if (consumed == 0) throw ParseError("malformed number", start);
    pos_ += consumed;
    return Expr::number(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    if (name == "pi") return Expr::pi();
    if (name.size() > 1 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos) {
      const int k = std::stoi(name.substr(1));
      if (k < 1 || k > n_) throw ParseError(fmt::format("unknown identifier '{}'", name), start);
      return Expr::variable(k - 1);
    }

    static const std::pair<const char*, Op> functions[] = {
        {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp},
        {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"pow", Op::Pow},
    };
    for (const auto& [fname, op] : functions) {
      if (name != fname) continue;
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != '(')
        throw ParseError(fmt::format("expected '(' after '{}'", name), pos_);
      ++pos_;
      std::vector<Expr> args;
      skip_space();
      if (!(pos_ < text_.size() && text_[pos_] == ')')) {
        args.push_back(parse_sum());
        while (accept(',')) args.push_back(parse_sum());
      }
      expect(')');
      const std::size_t arity = op == Op::Pow ? 2 : 1;
      if (args.size() != arity)
        throw ParseError(fmt::format("wrong arity for '{}': expected {}, got {}", name, arity,
                                     args.size()),
                         start);
      return op == Op::Pow ? Expr::binary(Op::Pow, args[0], args[1])
                           : Expr::unary(op, args[0]);
    }
    throw ParseError(fmt::format("unknown identifier '{}'", name), start);
  }

  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;
};

double checked(double v, const Expr& e, const char* what) {
  if (!std::isfinite(v)) throw EvalError(what, print(e));
  return v;
}

}  // namespace

Expr::Expr() : Expr(zero_literal()) {}

Expr Expr::number(double value) {
  auto node = std::make_shared<Node>();
  node->op = Op::Number;
  node->value = value;
  return Expr(std::move(node));
}

Expr Expr::pi() {
  auto node = std::make_shared<Node>();
  node->op = Op::Pi;
  return Expr(std::move(node));
}

Expr Expr::variable(int index) {
  auto node = std::make_shared<Node>();
  node->op = Op::Var;
  node->index = index;
  return Expr(std::move(node));
}

Expr Expr::unary(Op op, Expr arg) {
  // Negated literals are always stored folded so that printing and parsing
  // agree on a single representation.
  if (op == Op::Neg && arg.is_number()) return number(-arg.value());
  auto node = std::make_shared<Node>();
  node->op = op;
  node->args = {std::move(arg)};
  return Expr(std::move(node));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->args = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(node));
}

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
int Expr::index() const { return node_->index; }
const std::vector<Expr>& Expr::args() const { return node_->args; }

bool Expr::depends_on_variables() const {
  if (op() == Op::Var) return true;
  for (const auto& a : args())
    if (a.depends_on_variables()) return true;
  return false;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  if (a.op() == Op::Number) return a.value() == b.value();
  if (a.op() == Op::Var) return a.index() == b.index();
  if (a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!(a.args()[i] == b.args()[i])) return false;
  return true;
}

Expr parse(std::string_view text, int n) { return Parser(text, n).parse_all(); }

std::string print(const Expr& e) {
  switch (e.op()) {
    case Op::Number:
      if (e.value() < 0.0 || std::signbit(e.value())) return fmt::format("(-{:.17g})", -e.value());
      return fmt::format("{:.17g}", e.value());
    case Op::Pi: return "pi";
    case Op::Var: return fmt::format("x{}", e.index() + 1);
    case Op::Neg: return "(-" + print(e.args()[0]) + ")";
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
      return "(" + print(e.args()[0]) + binary_symbol(e.op()) + print(e.args()[1]) + ")";
    default: return std::string(function_name(e.op())) + "(" + print(e.args()[0]) + ")";
  }
}

double eval(const Expr& e, const Vector& x) {
  switch (e.op()) {
    case Op::Number: return e.value();
    case Op::Pi: return std::numbers::pi;
    case Op::Var:
      if (e.index() >= x.size()) throw EvalError("variable out of range", print(e));
      return x[e.index()];
    case Op::Neg: return -eval(e.args()[0], x);
    case Op::Add: return checked(eval(e.args()[0], x) + eval(e.args()[1], x), e, "overflow");
    case Op::Sub: return checked(eval(e.args()[0], x) - eval(e.args()[1], x), e, "overflow");
    case Op::Mul: return checked(eval(e.args()[0], x) * eval(e.args()[1], x), e, "overflow");
    case Op::Div: {
      const double num = eval(e.args()[0], x);
      const double den = eval(e.args()[1], x);
      if (den == 0.0) throw EvalError("division by zero", print(e));
      return checked(num / den, e, "overflow");
    }
    case Op::Pow:
      return checked(std::pow(eval(e.args()[0], x), eval(e.args()[1], x)), e, "invalid power");
    case Op::Sin: return std::sin(eval(e.args()[0], x));
    case Op::Cos: return std::cos(eval(e.args()[0], x));
    case Op::Exp: return checked(std::exp(eval(e.args()[0], x)), e, "overflow");
    case Op::Log: {
      const double a = eval(e.args()[0], x);
      if (!(a > 0.0)) throw EvalError("log of non-positive value", print(e));
      return std::log(a);
    }
    case Op::Sqrt: {
      const double a = eval(e.args()[0], x);
      if (a < 0.0) throw EvalError("sqrt of negative value", print(e));
      return std::sqrt(a);
    }
  }
  throw EvalError("unknown node", print(e));
}

Expr differentiate(const Expr& e, int index) {
  const auto& args = e.args();
  switch (e.op()) {
    case Op::Number:
    case Op::Pi: return zero_literal();
    case Op::Var: return Expr::number(e.index() == index ? 1.0 : 0.0);
    case Op::Neg: return neg(differentiate(args[0], index));
    case Op::Add: return add(differentiate(args[0], index), differentiate(args[1], index));
    case Op::Sub: return sub(differentiate(args[0], index), differentiate(args[1], index));
    case Op::Mul:
      return add(mul(differentiate(args[0], index), args[1]),
                 mul(args[0], differentiate(args[1], index)));
    case Op::Div: {
      // (a/b)' = a'/b - a b'/b^2
      const Expr da = differentiate(args[0], index);
      const Expr db = differentiate(args[1], index);
      return sub(div(da, args[1]), div(mul(args[0], db), pow(args[1], Expr::number(2.0))));
    }
    case Op::Pow: {
      const Expr& base = args[0];
      const Expr& exponent = args[1];
      const Expr dbase = differentiate(base, index);
      if (!exponent.depends_on_variables()) {
        return mul(mul(exponent, pow(base, sub(exponent, Expr::number(1.0)))), dbase);
      }
      const Expr dexp = differentiate(exponent, index);
      return mul(e, add(mul(dexp, Expr::unary(Op::Log, base)), div(mul(exponent, dbase), base)));
    }
    case Op::Sin:
      return mul(differentiate(args[0], index), Expr::unary(Op::Cos, args[0]));
    case Op::Cos:
      return neg(mul(differentiate(args[0], index), Expr::unary(Op::Sin, args[0])));
    case Op::Exp: return mul(differentiate(args[0], index), e);
    case Op::Log: return div(differentiate(args[0], index), args[0]);
    case Op::Sqrt: return div(differentiate(args[0], index), mul(Expr::number(2.0), e));
  }
  return zero_literal();
}

int variable_count(const Expr& e) {
  int count = e.op() == Op::Var ? e.index() + 1 : 0;
  for (const auto& a : e.args()) count = std::max(count, variable_count(a));
  return count;
}

}  // namespace isoembed::expr
