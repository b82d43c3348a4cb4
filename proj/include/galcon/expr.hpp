#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

namespace galcon {

/// Error raised by parse(); carries the byte offset of the offending token.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

/// Evaluation hit a singular operation: division by zero, log of a
/// nonpositive value, sqrt of a negative, zero raised to a negative power,
/// or a fractional power of a negative base.
class EvalDomainError : public std::runtime_error {
public:
  EvalDomainError(const std::string& message, std::string subexpression)
      : std::runtime_error(message + " in `" + subexpression + "`"),
        subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const { return subexpression_; }

private:
  std::string subexpression_;
};

class SingularMatrixError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class VarKind : std::uint8_t { T, X, Y };

struct Variable {
  VarKind kind = VarKind::T;
  int index = 0;  // 1-based for X/Y, 0 for T

  friend bool operator==(const Variable&, const Variable&) = default;
};

inline Variable var_t() { return {VarKind::T, 0}; }
inline Variable var_x(int i) { return {VarKind::X, i}; }
inline Variable var_y(int i) { return {VarKind::Y, i}; }

/// Chart coordinates are ordered t, x1..xn, y1..yn (indices 0..2n).
int coordinate_index(const Variable& v, int n);
Variable coordinate_variable(int index, int n);
std::string variable_name(const Variable& v);

/// A point of the (2n+1)-dimensional chart.
struct ChartPoint {
  double t = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd y;

  int dim() const { return static_cast<int>(x.size()); }
  double coordinate(int index) const;
  ChartPoint shifted(int index, double delta) const;
  static ChartPoint zero(int n);
};

enum class UnaryOp : std::uint8_t { Neg, Sin, Cos, Exp, Log, Sqrt };
enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Pow };

class ExprNode;
/// Immutable expression tree; subtrees are shared freely.
using Expr = std::shared_ptr<const ExprNode>;

class ExprNode {
public:
  enum class Tag : std::uint8_t { Constant, Var, Unary, Binary };

  Tag tag = Tag::Constant;
  double value = 0.0;  // Tag::Constant
  Variable var;        // Tag::Var
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  Expr a;  // unary operand / binary lhs
  Expr b;  // binary rhs
};

Expr constant(double v);
Expr variable(Variable v);
Expr make_unary(UnaryOp op, Expr operand);
Expr make_binary(BinaryOp op, Expr lhs, Expr rhs);

Expr operator-(const Expr& e);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator*(double c, const Expr& e);
Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, double exponent);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);

bool is_constant(const Expr& e, double v);
bool is_zero(const Expr& e);
bool structurally_equal(const Expr& a, const Expr& b);
int max_variable_index(const Expr& e);

/// Parse a formula over t, x1..xn, y1..yn, literals, sin/cos/exp/log/sqrt,
/// and + - * / ^ (with ^ right-associative and binding tighter than a unary
/// minus applied to its base). Variable indices are validated against n.
Expr parse(const std::string& source, int n);

/// Emit text in the grammar accepted by parse(). For parser-produced trees,
/// parse(to_string(e), n) is structurally identical to e.
std::string to_string(const Expr& e);

double evaluate(const Expr& e, const ChartPoint& p);

/// Exact symbolic partial derivative; total on all trees, nesting supported.
Expr differentiate(const Expr& e, const Variable& v);

/// Semantics-preserving cleanup: constant folding and the unit/annihilator
/// rules (0+e, 0*e, 1*e, e^1, ...). Not canonical.
Expr simplify(const Expr& e);

}  // namespace galcon
