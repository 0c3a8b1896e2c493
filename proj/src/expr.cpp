#include "qvi/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <utility>

#include "qvi/errors.hpp"

namespace qvi {

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::EmptyInput: return "empty input";
    case ParseErrorKind::BadNumber: return "malformed number";
    case ParseErrorKind::UnexpectedCharacter: return "unexpected character";
    case ParseErrorKind::UnexpectedToken: return "unexpected token";
    case ParseErrorKind::UnexpectedEnd: return "unexpected end of input";
    case ParseErrorKind::UnknownIdentifier: return "unknown identifier";
    case ParseErrorKind::ArityMismatch: return "wrong number of arguments";
    case ParseErrorKind::VariableOutOfRange: return "variable out of range";
    case ParseErrorKind::TrailingTokens: return "trailing tokens";
    case ParseErrorKind::NonIntegerExponent: return "exponent must be a positive integer literal";
  }
  return "parse error";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t offset, const std::string& detail)
    : Error(std::string(to_string(kind)) + " at offset " + std::to_string(offset) +
            (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      offset_(offset) {}

}  // namespace qvi

namespace qvi::expr {
namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ >= src_.size()) {
      current_ = {Tok::End, pos_, {}};
      return;
    }
    const std::size_t start = pos_;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number(start);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        ++pos_;
      }
      current_ = {Tok::Ident, start, src_.substr(start, pos_ - start)};
      return;
    }
    static constexpr std::array<std::pair<char, Tok>, 8> kPunct{{{'+', Tok::Plus},
                                                                 {'-', Tok::Minus},
                                                                 {'*', Tok::Star},
                                                                 {'/', Tok::Slash},
                                                                 {'^', Tok::Caret},
                                                                 {'(', Tok::LParen},
                                                                 {')', Tok::RParen},
                                                                 {',', Tok::Comma}}};
    for (const auto& [ch, kind] : kPunct) {
      if (ch == c) {
        ++pos_;
        current_ = {kind, start, src_.substr(start, 1)};
        return;
      }
    }
    throw ParseError(ParseErrorKind::UnexpectedCharacter, start, std::string(1, c));
  }

  void lex_number(std::size_t start) {
    std::size_t p = pos_;
    auto digits = [&] {
      while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
    };
    digits();
    if (p < src_.size() && src_[p] == '.') {
      ++p;
      digits();
    }
    if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
        p = q;
        digits();
      }
    }
    const std::string_view text = src_.substr(start, p - start);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
      throw ParseError(ParseErrorKind::BadNumber, start, std::string(text));
    }
    pos_ = p;
    current_ = {Tok::Number, start, text, value};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token current_{Tok::End, 0, {}};
};

// Binding powers. Prefix minus sits between '*' and '^'.
constexpr int kAddBp = 10;
constexpr int kMulBp = 20;
constexpr int kNegBp = 30;
constexpr int kPowBp = 40;

NodePtr make(auto&& v) { return std::make_shared<const Node>(Node{std::forward<decltype(v)>(v)}); }

std::optional<std::pair<Func, std::size_t>> lookup_func(std::string_view name) {
  if (name == "sin") return std::pair{Func::Sin, std::size_t{1}};
  if (name == "cos") return std::pair{Func::Cos, std::size_t{1}};
  if (name == "abs") return std::pair{Func::Abs, std::size_t{1}};
  if (name == "sqrt") return std::pair{Func::Sqrt, std::size_t{1}};
  if (name == "min") return std::pair{Func::Min, std::size_t{2}};
  if (name == "max") return std::pair{Func::Max, std::size_t{2}};
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view src, std::size_t dim) : lex_(src), dim_(dim) {}

  NodePtr parse_all() {
    if (lex_.peek().kind == Tok::End) throw ParseError(ParseErrorKind::EmptyInput, 0, "");
    NodePtr e = parse_expr(0);
    const Token& t = lex_.peek();
    if (t.kind != Tok::End) throw ParseError(ParseErrorKind::TrailingTokens, t.offset, std::string(t.text));
    return e;
  }

 private:
  static int infix_bp(Tok t) {
    switch (t) {
      case Tok::Plus:
      case Tok::Minus: return kAddBp;
      case Tok::Star:
      case Tok::Slash: return kMulBp;
      case Tok::Caret: return kPowBp;
      default: return -1;
    }
  }

  NodePtr parse_expr(int min_bp) {
    NodePtr lhs = parse_prefix();
    for (;;) {
      const Token op = lex_.peek();
      const int bp = infix_bp(op.kind);
      if (bp < 0 || bp <= min_bp) break;
      lex_.next();
      if (op.kind == Tok::Caret) {
        lhs = make(Binary{BinaryOp::Pow, lhs, parse_exponent()});
        continue;
      }
      NodePtr rhs = parse_expr(bp);
      const BinaryOp bop = op.kind == Tok::Plus    ? BinaryOp::Add
                           : op.kind == Tok::Minus ? BinaryOp::Sub
                           : op.kind == Tok::Star  ? BinaryOp::Mul
                                                   : BinaryOp::Div;
      lhs = make(Binary{bop, lhs, rhs});
    }
    return lhs;
  }

  // Right operand of '^'. It must come out as a single integer literal, so a
  // chain such as a^b^c is rejected rather than grouped.
  NodePtr parse_exponent() {
    const std::size_t at = lex_.peek().offset;
    NodePtr e = parse_expr(kPowBp - 1);
    const auto* num = std::get_if<Number>(&e->value);
    if (num == nullptr || num->value < 1.0 || num->value != std::floor(num->value) || num->value > 1e6) {
      throw ParseError(ParseErrorKind::NonIntegerExponent, at, "");
    }
    return e;
  }

  NodePtr parse_prefix() {
    const Token t = lex_.next();
    switch (t.kind) {
      case Tok::Number: return make(Number{t.number});
      case Tok::Minus: return make(Negate{parse_expr(kNegBp)});
      case Tok::LParen: {
        NodePtr inner = parse_expr(0);
        expect(Tok::RParen, ")");
        return inner;
      }
      case Tok::Ident: return parse_ident(t);
      case Tok::End: throw ParseError(ParseErrorKind::UnexpectedEnd, t.offset, "");
      default: throw ParseError(ParseErrorKind::UnexpectedToken, t.offset, std::string(t.text));
    }
  }

  NodePtr parse_ident(const Token& t) {
    if (auto f = lookup_func(t.text)) {
      expect(Tok::LParen, "(");
      std::vector<NodePtr> args;
      if (lex_.peek().kind != Tok::RParen) {
        args.push_back(parse_expr(0));
        while (lex_.peek().kind == Tok::Comma) {
          lex_.next();
          args.push_back(parse_expr(0));
        }
      }
      expect(Tok::RParen, ")");
      if (args.size() != f->second) {
        throw ParseError(ParseErrorKind::ArityMismatch, t.offset,
                         std::string(t.text) + " takes " + std::to_string(f->second) + ", got " +
                             std::to_string(args.size()));
      }
      return make(Call{f->first, std::move(args)});
    }
    if (t.text.size() >= 2 && t.text[0] == 'x') {
      std::size_t index = 0;
      const char* first = t.text.data() + 1;
      const char* last = t.text.data() + t.text.size();
      const auto [ptr, ec] = std::from_chars(first, last, index);
      if (ec == std::errc() && ptr == last && (t.text[1] != '0' || t.text.size() == 2)) {
        if (index < 1 || index > dim_) {
          throw ParseError(ParseErrorKind::VariableOutOfRange, t.offset,
                           std::string(t.text) + " with dimension " + std::to_string(dim_));
        }
        return make(Var{index - 1});
      }
    }
    throw ParseError(ParseErrorKind::UnknownIdentifier, t.offset, std::string(t.text));
  }

  void expect(Tok kind, const char* text) {
    const Token& t = lex_.peek();
    if (t.kind == kind) {
      lex_.next();
      return;
    }
    if (t.kind == Tok::End) throw ParseError(ParseErrorKind::UnexpectedEnd, t.offset, std::string("expected ") + text);
    throw ParseError(ParseErrorKind::UnexpectedToken, t.offset,
                     std::string("expected ") + text + ", got " + std::string(t.text));
  }

  Lexer lex_;
  std::size_t dim_;
};

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
  return v;
}

double eval_node(const Node& n, std::span<const double> x) {
  return std::visit(
      [&](const auto& node) -> double {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Number>) {
          return node.value;
        } else if constexpr (std::is_same_v<T, Var>) {
          return x[node.index];
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -eval_node(*node.child, x);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const double a = eval_node(*node.lhs, x);
          if (node.op == BinaryOp::Pow) {
            const auto exponent = static_cast<long>(std::get<Number>(node.rhs->value).value);
            double r = a;
            for (long i = 1; i < exponent; ++i) r *= a;
            return checked(r, "power");
          }
          const double b = eval_node(*node.rhs, x);
          switch (node.op) {
            case BinaryOp::Add: return checked(a + b, "addition");
            case BinaryOp::Sub: return checked(a - b, "subtraction");
            case BinaryOp::Mul: return checked(a * b, "multiplication");
            case BinaryOp::Div:
              if (b == 0.0) throw EvalError("division by zero");
              return checked(a / b, "division");
            case BinaryOp::Pow: break;
          }
          return 0.0;
        } else {
          const double a = eval_node(*node.args[0], x);
          switch (node.func) {
            case Func::Sin: return checked(std::sin(a), "sin");
            case Func::Cos: return checked(std::cos(a), "cos");
            case Func::Abs: return std::abs(a);
            case Func::Sqrt: return checked(std::sqrt(a), "sqrt");
            case Func::Min: return std::min(a, eval_node(*node.args[1], x));
            case Func::Max: return std::max(a, eval_node(*node.args[1], x));
          }
          return 0.0;
        }
      },
      n.value);
}

void print_node(const Node& n, std::string& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Number>) {
          std::array<char, 32> buf{};
          const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), node.value);
          out.append(buf.data(), res.ptr);
        } else if constexpr (std::is_same_v<T, Var>) {
          out += 'x';
          out += std::to_string(node.index + 1);
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += "(-";
          print_node(*node.child, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Binary>) {
          static constexpr std::array<char, 5> kOps{'+', '-', '*', '/', '^'};
          out += '(';
          print_node(*node.lhs, out);
          out += kOps[static_cast<std::size_t>(node.op)];
          print_node(*node.rhs, out);
          out += ')';
        } else {
          out += func_name(node.func);
          out += '(';
          for (std::size_t i = 0; i < node.args.size(); ++i) {
            if (i > 0) out += ',';
            print_node(*node.args[i], out);
          }
          out += ')';
        }
      },
      n.value);
}

}  // namespace

std::string_view func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Abs: return "abs";
    case Func::Sqrt: return "sqrt";
    case Func::Min: return "min";
    case Func::Max: return "max";
  }
  return "?";
}

Expression::Expression(NodePtr root, std::size_t dim, std::string source)
    : root_(std::move(root)), dim_(dim), source_(std::move(source)) {}

double Expression::eval(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw ContractError("expression over " + std::to_string(dim_) + " variables evaluated at a point of dimension " +
                        std::to_string(x.size()));
  }
  return checked(eval_node(*root_, x), "expression");
}

Expression parse(std::string_view text, std::size_t dim) {
  if (dim == 0) throw ContractError("expression dimension must be positive");
  Parser p(text, dim);
  return Expression(p.parse_all(), dim, std::string(text));
}

std::string print(const Expression& e) {
  std::string out;
  print_node(e.root(), out);
  return out;
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.value.index() != b.value.index()) return false;
  return std::visit(
      [&](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.value);
        if constexpr (std::is_same_v<T, Number>) {
          return lhs.value == rhs.value;
        } else if constexpr (std::is_same_v<T, Var>) {
          return lhs.index == rhs.index;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return structurally_equal(*lhs.child, *rhs.child);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return lhs.op == rhs.op && structurally_equal(*lhs.lhs, *rhs.lhs) &&
                 structurally_equal(*lhs.rhs, *rhs.rhs);
        } else {
          if (lhs.func != rhs.func || lhs.args.size() != rhs.args.size()) return false;
          for (std::size_t i = 0; i < lhs.args.size(); ++i) {
            if (!structurally_equal(*lhs.args[i], *rhs.args[i])) return false;
          }
          return true;
        }
      },
      a.value);
}

Expression negate(const Expression& e) {
  auto root = make(Negate{std::make_shared<const Node>(e.root())});
  Expression out(root, e.dim(), "");
  return Expression(root, e.dim(), print(out));
}

Expression variable_minus(std::size_t index, const Expression& e) {
  if (index >= e.dim()) throw ContractError("variable index out of range");
  auto root = make(Binary{BinaryOp::Sub, make(Var{index}), std::make_shared<const Node>(e.root())});
  Expression out(root, e.dim(), "");
  return Expression(root, e.dim(), print(out));
}

}  // namespace qvi::expr
