#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "isoembed/common.hpp"

// Small scalar expression language used for user-supplied metric entries and
// embedding components.
//
//   expr    := sum
//   sum     := product (('+' | '-') product)*
//   product := power (('*' | '/') power)*
//   power   := unary ('^' unary)*            left associative
//   unary   := '-' unary | primary
//   primary := number | 'pi' | 'x'k | func '(' args ')' | '(' expr ')'
//   func    := sin | cos | exp | log | sqrt | pow
//
// Unary minus binds tighter than '^', so "-x1^2" is (-x1)^2.
namespace isoembed::expr {

enum class Op {
  Number,
  Pi,
  Var,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Sin,
  Cos,
  Exp,
  Log,
  Sqrt,
};

struct Node;

// Immutable, cheaply copyable handle to an expression tree.
class Expr {
 public:
  Expr();  // the literal 0

  static Expr number(double value);
  static Expr pi();
  // Variable x_{index+1}; indices are zero-based internally.
  static Expr variable(int index);
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  Op op() const;
  double value() const;  // Number only
  int index() const;     // Var only
  const std::vector<Expr>& args() const;

  bool is_number() const { return op() == Op::Number; }
  bool depends_on_variables() const;

  // Structural equality (literals compared bitwise-by-value).
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op = Op::Number;
  double value = 0.0;
  int index = 0;
  std::vector<Expr> args;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Raised for log/sqrt of negative arguments, division by zero and any other
// non-finite intermediate. Carries the printed offending subexpression.
class EvalError : public Error {
 public:
  EvalError(const std::string& what, std::string subexpression)
      : Error(what + " in '" + subexpression + "'"),
        subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

// Parses `text` allowing the variables x1..xn.
Expr parse(std::string_view text, int n);

// Fully parenthesised text that parses back to a structurally equal tree.
std::string print(const Expr& e);

double eval(const Expr& e, const Vector& x);

// Symbolic partial derivative with respect to variable `index` (zero-based).
// Literal arithmetic is folded; nothing else is simplified.
Expr differentiate(const Expr& e, int index);

// Highest variable index used plus one (0 for closed expressions).
int variable_count(const Expr& e);

}  // namespace isoembed::expr
