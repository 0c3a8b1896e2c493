#pragma once

// Scalar expression language for problem files.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' integer)?
//   primary := number | 'x' index | func '(' args ')' | '(' expr ')'
//
// Exponents must be positive integer literals. Unary minus binds looser than
// '^', so -2^2 == -(2^2). Functions: sin cos abs sqrt (one argument),
// min max (two arguments).

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qvi::expr {

enum class Func { Sin, Cos, Abs, Sqrt, Min, Max };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value;
};
struct Var {
  std::size_t index;  // zero-based: x1 -> 0
};
struct Negate {
  NodePtr child;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;  // for Pow: a Number holding a positive integer
};
struct Call {
  Func func;
  std::vector<NodePtr> args;
};

struct Node {
  std::variant<Number, Var, Negate, Binary, Call> value;
};

/// A parsed expression over x1..x<dim>. Immutable; cheap to copy.
class Expression {
 public:
  Expression(NodePtr root, std::size_t dim, std::string source);

  const Node& root() const { return *root_; }
  std::size_t dim() const noexcept { return dim_; }
  /// The text this expression was parsed from.
  const std::string& source() const noexcept { return source_; }

  /// Throws EvalError on division by zero or any non-finite result.
  double eval(std::span<const double> x) const;

 private:
  NodePtr root_;
  std::size_t dim_;
  std::string source_;
};

Expression parse(std::string_view text, std::size_t dim);

/// Fully parenthesized rendering; parse(print(e)) is structurally equal to e.
std::string print(const Expression& e);

bool structurally_equal(const Node& a, const Node& b);

/// -e
Expression negate(const Expression& e);
/// x<index+1> − e
Expression variable_minus(std::size_t index, const Expression& e);

std::string_view func_name(Func f);

}  // namespace qvi::expr
