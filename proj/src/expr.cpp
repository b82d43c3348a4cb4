#include "galcon/expr.hpp"

#include <cctype>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

namespace galcon {

int coordinate_index(const Variable& v, int n) {
  switch (v.kind) {
    case VarKind::T:
      return 0;
    case VarKind::X:
      return v.index;
    case VarKind::Y:
      return n + v.index;
  }
  return 0;
}

Variable coordinate_variable(int index, int n) {
  if (index == 0) return var_t();
  if (index <= n) return var_x(index);
  return var_y(index - n);
}

std::string variable_name(const Variable& v) {
  switch (v.kind) {
    case VarKind::T:
      return "t";
    case VarKind::X:
      return "x" + std::to_string(v.index);
    case VarKind::Y:
      return "y" + std::to_string(v.index);
  }
  return "?";
}

double ChartPoint::coordinate(int index) const {
  if (index == 0) return t;
  if (index <= dim()) return x(index - 1);
  return y(index - dim() - 1);
}

ChartPoint ChartPoint::shifted(int index, double delta) const {
  ChartPoint q = *this;
  if (index == 0) {
    q.t += delta;
  } else if (index <= dim()) {
    q.x(index - 1) += delta;
  } else {
    q.y(index - dim() - 1) += delta;
  }
  return q;
}

ChartPoint ChartPoint::zero(int n) {
  return {0.0, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
}

Expr constant(double v) {
  auto node = std::make_shared<ExprNode>();
  node->tag = ExprNode::Tag::Constant;
  node->value = v;
  return node;
}

Expr variable(Variable v) {
  auto node = std::make_shared<ExprNode>();
  node->tag = ExprNode::Tag::Var;
  node->var = v;
  return node;
}

Expr make_unary(UnaryOp op, Expr operand) {
  auto node = std::make_shared<ExprNode>();
  node->tag = ExprNode::Tag::Unary;
  node->uop = op;
  node->a = std::move(operand);
  return node;
}

Expr make_binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto node = std::make_shared<ExprNode>();
  node->tag = ExprNode::Tag::Binary;
  node->bop = op;
  node->a = std::move(lhs);
  node->b = std::move(rhs);
  return node;
}

Expr operator-(const Expr& e) { return make_unary(UnaryOp::Neg, e); }
Expr operator+(const Expr& a, const Expr& b) { return make_binary(BinaryOp::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return make_binary(BinaryOp::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return make_binary(BinaryOp::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return make_binary(BinaryOp::Div, a, b); }
Expr operator*(double c, const Expr& e) { return constant(c) * e; }
Expr pow(const Expr& base, const Expr& exponent) { return make_binary(BinaryOp::Pow, base, exponent); }
Expr pow(const Expr& base, double exponent) { return pow(base, constant(exponent)); }
Expr sin(const Expr& e) { return make_unary(UnaryOp::Sin, e); }
Expr cos(const Expr& e) { return make_unary(UnaryOp::Cos, e); }
Expr exp(const Expr& e) { return make_unary(UnaryOp::Exp, e); }
Expr log(const Expr& e) { return make_unary(UnaryOp::Log, e); }
Expr sqrt(const Expr& e) { return make_unary(UnaryOp::Sqrt, e); }

bool is_constant(const Expr& e, double v) {
  return e->tag == ExprNode::Tag::Constant && e->value == v;
}

bool is_zero(const Expr& e) { return is_constant(e, 0.0); }

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case ExprNode::Tag::Constant:
      return a->value == b->value;
    case ExprNode::Tag::Var:
      return a->var == b->var;
    case ExprNode::Tag::Unary:
      return a->uop == b->uop && structurally_equal(a->a, b->a);
    case ExprNode::Tag::Binary:
      return a->bop == b->bop && structurally_equal(a->a, b->a) && structurally_equal(a->b, b->b);
  }
  return false;
}

int max_variable_index(const Expr& e) {
  switch (e->tag) {
    case ExprNode::Tag::Constant:
      return 0;
    case ExprNode::Tag::Var:
      return e->var.kind == VarKind::T ? 0 : e->var.index;
    case ExprNode::Tag::Unary:
      return max_variable_index(e->a);
    case ExprNode::Tag::Binary:
      return std::max(max_variable_index(e->a), max_variable_index(e->b));
  }
  return 0;
}

// --- parsing ---------------------------------------------------------------

namespace {

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  TokKind kind;
  double number = 0.0;
  std::string text;
  std::size_t pos = 0;
};

std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      bool any_digit = false;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j, any_digit = true;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j, any_digit = true;
      }
      if (!any_digit) throw ParseError("malformed number", start);
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          ++k;
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      Token tok{TokKind::Number, 0.0, src.substr(i, j - i), start};
      tok.number = std::stod(tok.text);
      out.push_back(tok);
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({TokKind::Ident, 0.0, src.substr(i, j - i), start});
      i = j;
      continue;
    }
    TokKind kind;
    switch (c) {
      case '+': kind = TokKind::Plus; break;
      case '-': kind = TokKind::Minus; break;
      case '*': kind = TokKind::Star; break;
      case '/': kind = TokKind::Slash; break;
      case '^': kind = TokKind::Caret; break;
      case '(': kind = TokKind::LParen; break;
      case ')': kind = TokKind::RParen; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({kind, 0.0, std::string(1, c), start});
    ++i;
  }
  out.push_back({TokKind::End, 0.0, "", src.size()});
  return out;
}

struct Parser {
  const std::vector<Token>& toks;
  std::size_t at = 0;
  int n;

  const Token& peek() const { return toks[at]; }
  Token next() { return toks[at++]; }
  bool accept(TokKind k) {
    if (peek().kind == k) {
      ++at;
      return true;
    }
    return false;
  }
  void expect(TokKind k, const char* what) {
    if (!accept(k)) throw ParseError(std::string("expected ") + what, peek().pos);
  }

  // expression := term (('+'|'-') term)*
  Expr expression() {
    Expr e = term();
    for (;;) {
      if (accept(TokKind::Plus)) {
        e = make_binary(BinaryOp::Add, e, term());
      } else if (accept(TokKind::Minus)) {
        e = make_binary(BinaryOp::Sub, e, term());
      } else {
        return e;
      }
    }
  }

  // term := unary (('*'|'/') unary)*
  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept(TokKind::Star)) {
        e = make_binary(BinaryOp::Mul, e, unary());
      } else if (accept(TokKind::Slash)) {
        e = make_binary(BinaryOp::Div, e, unary());
      } else {
        return e;
      }
    }
  }

  // unary := '-' unary | power.  A '-' never captures an exponentiation base:
  // -x^2 parses as -(x^2).
  Expr unary() {
    if (accept(TokKind::Minus)) return make_unary(UnaryOp::Neg, unary());
    return power();
  }

  // power := atom ('^' unary)?   (right-associative)
  Expr power() {
    Expr base = atom();
    if (accept(TokKind::Caret)) return make_binary(BinaryOp::Pow, base, unary());
    return base;
  }

  Expr atom() {
    const Token tok = next();
    switch (tok.kind) {
      case TokKind::Number:
        return constant(tok.number);
      case TokKind::LParen: {
        Expr e = expression();
        expect(TokKind::RParen, "')'");
        return e;
      }
      case TokKind::Ident:
        return ident(tok);
      default:
        throw ParseError("expected a number, variable, function, or '('", tok.pos);
    }
  }

  Expr ident(const Token& tok) {
    if (peek().kind == TokKind::LParen) {
      UnaryOp op;
      if (tok.text == "sin") op = UnaryOp::Sin;
      else if (tok.text == "cos") op = UnaryOp::Cos;
      else if (tok.text == "exp") op = UnaryOp::Exp;
      else if (tok.text == "log") op = UnaryOp::Log;
      else if (tok.text == "sqrt") op = UnaryOp::Sqrt;
      else throw ParseError("unknown function '" + tok.text + "'", tok.pos);
      next();  // '('
      Expr arg = expression();
      expect(TokKind::RParen, "')'");
      return make_unary(op, arg);
    }
    if (tok.text == "t") return variable(var_t());
    if ((tok.text[0] == 'x' || tok.text[0] == 'y') && tok.text.size() > 1) {
      for (std::size_t k = 1; k < tok.text.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(tok.text[k])))
          throw ParseError("unknown identifier '" + tok.text + "'", tok.pos);
      int index = std::stoi(tok.text.substr(1));
      if (index < 1 || index > n)
        throw ParseError("variable index out of range for n=" + std::to_string(n) + ": '" +
                             tok.text + "'",
                         tok.pos);
      return variable(tok.text[0] == 'x' ? var_x(index) : var_y(index));
    }
    throw ParseError("unknown identifier '" + tok.text + "'", tok.pos);
  }
};

}  // namespace

Expr parse(const std::string& source, int n) {
  if (n < 1) throw std::invalid_argument("parse: dimension must be positive");
  auto toks = tokenize(source);
  Parser p{toks, 0, n};
  Expr e = p.expression();
  if (p.peek().kind != TokKind::End) throw ParseError("trailing input", p.peek().pos);
  return e;
}

// --- printing ---------------------------------------------------------------

namespace {

// atom 6, pow 4, unary minus 3, mul/div 2, add/sub 1
int precedence(const Expr& e) {
  switch (e->tag) {
    case ExprNode::Tag::Constant:
      return e->value < 0 ? 3 : 6;
    case ExprNode::Tag::Var:
      return 6;
    case ExprNode::Tag::Unary:
      return e->uop == UnaryOp::Neg ? 3 : 6;
    case ExprNode::Tag::Binary:
      switch (e->bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div:
          return 2;
        case BinaryOp::Pow:
          return 4;
      }
  }
  return 6;
}

std::string render(const Expr& e);

std::string child(const Expr& c, int min_prec) {
  std::string s = render(c);
  if (precedence(c) < min_prec) return "(" + s + ")";
  return s;
}

std::string format_constant(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string render(const Expr& e) {
  switch (e->tag) {
    case ExprNode::Tag::Constant:
      return format_constant(e->value);
    case ExprNode::Tag::Var:
      return variable_name(e->var);
    case ExprNode::Tag::Unary:
      switch (e->uop) {
        case UnaryOp::Neg:
          return "-" + child(e->a, 3);
        case UnaryOp::Sin:
          return "sin(" + render(e->a) + ")";
        case UnaryOp::Cos:
          return "cos(" + render(e->a) + ")";
        case UnaryOp::Exp:
          return "exp(" + render(e->a) + ")";
        case UnaryOp::Log:
          return "log(" + render(e->a) + ")";
        case UnaryOp::Sqrt:
          return "sqrt(" + render(e->a) + ")";
      }
      return "?";
    case ExprNode::Tag::Binary:
      switch (e->bop) {
        case BinaryOp::Add:
          return child(e->a, 1) + " + " + child(e->b, 2);
        case BinaryOp::Sub:
          return child(e->a, 1) + " - " + child(e->b, 2);
        case BinaryOp::Mul:
          return child(e->a, 2) + "*" + child(e->b, 3);
        case BinaryOp::Div:
          return child(e->a, 2) + "/" + child(e->b, 3);
        case BinaryOp::Pow:
          // base must be atomic; exponent may be any unary-level expression
          return child(e->a, 5) + "^" + child(e->b, 3);
      }
      return "?";
  }
  return "?";
}

}  // namespace

std::string to_string(const Expr& e) { return render(e); }

// --- evaluation ---------------------------------------------------------------

namespace {

double checked_pow(double base, double expo, const Expr& node) {
  if (base == 0.0 && expo < 0.0)
    throw EvalDomainError("zero raised to a negative power", to_string(node));
  if (base < 0.0 && expo != std::floor(expo))
    throw EvalDomainError("fractional power of a negative base", to_string(node));
  return std::pow(base, expo);
}

}  // namespace

double evaluate(const Expr& e, const ChartPoint& p) {
  switch (e->tag) {
    case ExprNode::Tag::Constant:
      return e->value;
    case ExprNode::Tag::Var:
      switch (e->var.kind) {
        case VarKind::T:
          return p.t;
        case VarKind::X:
          if (e->var.index > p.dim())
            throw std::invalid_argument("evaluate: point dimension too small for " +
                                        variable_name(e->var));
          return p.x(e->var.index - 1);
        case VarKind::Y:
          if (e->var.index > p.dim())
            throw std::invalid_argument("evaluate: point dimension too small for " +
                                        variable_name(e->var));
          return p.y(e->var.index - 1);
      }
      return 0.0;
    case ExprNode::Tag::Unary: {
      double v = evaluate(e->a, p);
      switch (e->uop) {
        case UnaryOp::Neg:
          return -v;
        case UnaryOp::Sin:
          return std::sin(v);
        case UnaryOp::Cos:
          return std::cos(v);
        case UnaryOp::Exp:
          return std::exp(v);
        case UnaryOp::Log:
          if (v <= 0.0) throw EvalDomainError("log of a nonpositive value", to_string(e));
          return std::log(v);
        case UnaryOp::Sqrt:
          if (v < 0.0) throw EvalDomainError("sqrt of a negative value", to_string(e));
          return std::sqrt(v);
      }
      return 0.0;
    }
    case ExprNode::Tag::Binary: {
      double lhs = evaluate(e->a, p);
      double rhs = evaluate(e->b, p);
      switch (e->bop) {
        case BinaryOp::Add:
          return lhs + rhs;
        case BinaryOp::Sub:
          return lhs - rhs;
        case BinaryOp::Mul:
          return lhs * rhs;
        case BinaryOp::Div:
          if (rhs == 0.0) throw EvalDomainError("division by zero", to_string(e));
          return lhs / rhs;
        case BinaryOp::Pow:
          return checked_pow(lhs, rhs, e);
      }
      return 0.0;
    }
  }
  return 0.0;
}

// --- differentiation ---------------------------------------------------------

namespace {

Expr d(const Expr& e, const Variable& v) {
  switch (e->tag) {
    case ExprNode::Tag::Constant:
      return constant(0.0);
    case ExprNode::Tag::Var:
      return constant(e->var == v ? 1.0 : 0.0);
    case ExprNode::Tag::Unary: {
      Expr da = d(e->a, v);
      switch (e->uop) {
        case UnaryOp::Neg:
          return -da;
        case UnaryOp::Sin:
          return cos(e->a) * da;
        case UnaryOp::Cos:
          return -(sin(e->a) * da);
        case UnaryOp::Exp:
          return exp(e->a) * da;
        case UnaryOp::Log:
          return da / e->a;
        case UnaryOp::Sqrt:
          return da / (constant(2.0) * sqrt(e->a));
      }
      return constant(0.0);
    }
    case ExprNode::Tag::Binary: {
      switch (e->bop) {
        case BinaryOp::Add:
          return d(e->a, v) + d(e->b, v);
        case BinaryOp::Sub:
          return d(e->a, v) - d(e->b, v);
        case BinaryOp::Mul:
          return d(e->a, v) * e->b + e->a * d(e->b, v);
        case BinaryOp::Div:
          return (d(e->a, v) * e->b - e->a * d(e->b, v)) / pow(e->b, 2.0);
        case BinaryOp::Pow:
          if (e->b->tag == ExprNode::Tag::Constant) {
            double c = e->b->value;
            return constant(c) * pow(e->a, constant(c - 1.0)) * d(e->a, v);
          }
          // u^w = exp(w log u)
          return pow(e->a, e->b) * (d(e->b, v) * log(e->a) + e->b * d(e->a, v) / e->a);
      }
      return constant(0.0);
    }
  }
  return constant(0.0);
}

}  // namespace

Expr differentiate(const Expr& e, const Variable& v) { return simplify(d(e, v)); }

// --- simplification ------------------------------------------------------------

namespace {

std::optional<double> fold_unary(UnaryOp op, double v) {
  switch (op) {
    case UnaryOp::Neg:
      return -v;
    case UnaryOp::Sin:
      return std::sin(v);
    case UnaryOp::Cos:
      return std::cos(v);
    case UnaryOp::Exp:
      return std::exp(v);
    case UnaryOp::Log:
      if (v <= 0.0) return std::nullopt;
      return std::log(v);
    case UnaryOp::Sqrt:
      if (v < 0.0) return std::nullopt;
      return std::sqrt(v);
  }
  return std::nullopt;
}

std::optional<double> fold_binary(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::Add:
      return a + b;
    case BinaryOp::Sub:
      return a - b;
    case BinaryOp::Mul:
      return a * b;
    case BinaryOp::Div:
      if (b == 0.0) return std::nullopt;
      return a / b;
    case BinaryOp::Pow:
      if (a == 0.0 && b < 0.0) return std::nullopt;
      if (a < 0.0 && b != std::floor(b)) return std::nullopt;
      return std::pow(a, b);
  }
  return std::nullopt;
}

}  // namespace

Expr simplify(const Expr& e) {
  switch (e->tag) {
    case ExprNode::Tag::Constant:
    case ExprNode::Tag::Var:
      return e;
    case ExprNode::Tag::Unary: {
      Expr a = simplify(e->a);
      if (a->tag == ExprNode::Tag::Constant) {
        if (auto v = fold_unary(e->uop, a->value)) return constant(*v);
      }
      if (e->uop == UnaryOp::Neg && a->tag == ExprNode::Tag::Unary && a->uop == UnaryOp::Neg)
        return a->a;
      if (a.get() == e->a.get()) return e;
      return make_unary(e->uop, a);
    }
    case ExprNode::Tag::Binary: {
      Expr a = simplify(e->a);
      Expr b = simplify(e->b);
      if (a->tag == ExprNode::Tag::Constant && b->tag == ExprNode::Tag::Constant) {
        if (auto v = fold_binary(e->bop, a->value, b->value)) return constant(*v);
      }
      switch (e->bop) {
        case BinaryOp::Add:
          if (is_zero(a)) return b;
          if (is_zero(b)) return a;
          if (b->tag == ExprNode::Tag::Unary && b->uop == UnaryOp::Neg &&
              structurally_equal(a, b->a))
            return constant(0.0);
          if (a->tag == ExprNode::Tag::Unary && a->uop == UnaryOp::Neg &&
              structurally_equal(a->a, b))
            return constant(0.0);
          break;
        case BinaryOp::Sub:
          if (is_zero(b)) return a;
          if (is_zero(a)) return simplify(make_unary(UnaryOp::Neg, b));
          if (structurally_equal(a, b)) return constant(0.0);
          break;
        case BinaryOp::Mul:
          if (is_zero(a) || is_zero(b)) return constant(0.0);
          if (is_constant(a, 1.0)) return b;
          if (is_constant(b, 1.0)) return a;
          break;
        case BinaryOp::Div:
          if (is_zero(a)) return constant(0.0);
          if (is_constant(b, 1.0)) return a;
          break;
        case BinaryOp::Pow:
          if (is_zero(b)) return constant(1.0);
          if (is_constant(b, 1.0)) return a;
          if (is_constant(a, 1.0)) return constant(1.0);
          break;
      }
      if (a.get() == e->a.get() && b.get() == e->b.get()) return e;
      return make_binary(e->bop, a, b);
    }
  }
  return e;
}

}  // namespace galcon
