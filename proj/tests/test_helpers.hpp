#pragma once

#include <random>
#include <string>
#include <vector>

#include "galcon/expr.hpp"
#include "galcon/forms.hpp"

namespace galcon::testing {

inline ChartPoint random_point(std::mt19937_64& rng, int n, double radius = 1.0) {
  std::uniform_real_distribution<double> dist(-radius, radius);
  ChartPoint p = ChartPoint::zero(n);
  p.t = dist(rng);
  for (int i = 0; i < n; ++i) {
    p.x(i) = dist(rng);
    p.y(i) = dist(rng);
  }
  return p;
}

inline TangentVector random_tangent(std::mt19937_64& rng, int n, double radius = 1.0) {
  std::uniform_real_distribution<double> dist(-radius, radius);
  TangentVector v = TangentVector::zero(n);
  v.vt = dist(rng);
  for (int i = 0; i < n; ++i) {
    v.vx(i) = dist(rng);
    v.vy(i) = dist(rng);
  }
  return v;
}

inline Eigen::MatrixXd random_invertible(std::mt19937_64& rng, int n, double spread = 1.0) {
  std::uniform_real_distribution<double> dist(-spread, spread);
  for (;;) {
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = dist(rng) + (i == j ? 1.5 : 0.0);
    if (std::abs(A.determinant()) > 0.1) return A;
  }
}

/// Central finite difference of evaluate along one chart variable.
inline double central_difference(const Expr& e, const Variable& v, const ChartPoint& p,
                                 double h = 1e-5) {
  const int idx = coordinate_index(v, p.dim());
  return (evaluate(e, p.shifted(idx, h)) - evaluate(e, p.shifted(idx, -h))) / (2.0 * h);
}

/// Expression corpus used by the derivative/round-trip property tests:
/// smooth formulas over the unit box, no singular operations.
inline std::vector<std::string> expression_corpus_sources(int n) {
  std::vector<std::string> out = {
      "0",
      "1.5",
      "t",
      "x1",
      "y1",
      "y1^2 - sin(x1)*t",
      "sin(x1)*y1^2 + t",
      "exp(x1)*y1",
      "cos(t)*x1 - y1^3",
      "sqrt(x1^2 + 1)",
      "x1*y1/(2 + cos(t))",
      "exp(sin(t) + x1*y1)",
      "-x1^2 + 2^y1",
      "log(exp(x1) + 1)",
      "t^3 - 2*t*x1*y1",
  };
  if (n >= 2) {
    out.push_back("x2*y1 - x1*y2");
    out.push_back("sin(x2)*cos(y2) + t*x1");
    out.push_back("(x1 + x2)^3/(4 + y2^2)");
  }
  if (n >= 3) {
    out.push_back("x3*y3 - exp(x2 - y1)");
    out.push_back("sqrt(1 + x3^2 + y2^2)");
  }
  return out;
}

inline std::vector<Expr> expression_corpus(int n) {
  std::vector<Expr> out;
  for (const std::string& src : expression_corpus_sources(n)) out.push_back(parse(src, n));
  return out;
}

/// Random smooth expression trees (no log/sqrt/div), for property tests that
/// want shapes beyond the fixed corpus.
inline Expr random_smooth_expr(std::mt19937_64& rng, int n, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_real_distribution<double> cdist(-2.0, 2.0);
  std::uniform_int_distribution<int> vdist(1, n);
  if (depth <= 0) {
    switch (pick(rng) % 4) {
      case 0: return constant(cdist(rng));
      case 1: return variable(var_t());
      case 2: return variable(var_x(vdist(rng)));
      default: return variable(var_y(vdist(rng)));
    }
  }
  switch (pick(rng)) {
    case 0: return random_smooth_expr(rng, n, depth - 1) + random_smooth_expr(rng, n, depth - 1);
    case 1: return random_smooth_expr(rng, n, depth - 1) - random_smooth_expr(rng, n, depth - 1);
    case 2:
    case 3: return random_smooth_expr(rng, n, depth - 1) * random_smooth_expr(rng, n, depth - 1);
    case 4: return sin(random_smooth_expr(rng, n, depth - 1));
    case 5: return cos(random_smooth_expr(rng, n, depth - 1));
    case 6: return pow(random_smooth_expr(rng, n, depth - 1), 2.0);
    case 7: return -random_smooth_expr(rng, n, depth - 1);
    default: return random_smooth_expr(rng, n, 0);
  }
}

}  // namespace galcon::testing
