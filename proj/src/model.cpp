#include "galcon/model.hpp"

#include "lu_guard.hpp"

#include <cmath>
#include <stdexcept>

#include "galcon/expr.hpp"

namespace galcon {

ModelPoint ModelPoint::origin(int n) {
  return {0.0, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
}

GalileanElement::GalileanElement(double t, Eigen::VectorXd x, Eigen::VectorXd y, Eigen::MatrixXd A)
    : t_(t), x_(std::move(x)), y_(std::move(y)), A_(std::move(A)) {
  const int n = dim();
  if (y_.size() != n || A_.rows() != n || A_.cols() != n)
    throw std::invalid_argument("GalileanElement: inconsistent block sizes");
}

GalileanElement GalileanElement::identity(int n) {
  return {0.0, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n),
          Eigen::MatrixXd::Identity(n, n)};
}

GalileanElement GalileanElement::from_matrix(const Eigen::MatrixXd& m, double tol) {
  const int n = static_cast<int>(m.rows()) - 2;
  if (n < 1 || m.cols() != m.rows()) throw std::invalid_argument("from_matrix: bad shape");
  double drift = std::abs(m(0, 0) - 1.0) + std::abs(m(1, 1) - 1.0);
  for (int j = 1; j < n + 2; ++j) drift = std::max(drift, std::abs(m(0, j)));
  for (int j = 2; j < n + 2; ++j) drift = std::max(drift, std::abs(m(1, j)));
  if (drift > tol) throw std::invalid_argument("from_matrix: block pattern violated");
  return {m(1, 0), m.block(2, 0, n, 1), m.block(2, 1, n, 1), m.block(2, 2, n, n)};
}

Eigen::MatrixXd GalileanElement::matrix() const {
  const int n = dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 2, n + 2);
  m(0, 0) = 1.0;
  m(1, 0) = t_;
  m(1, 1) = 1.0;
  m.block(2, 0, n, 1) = x_;
  m.block(2, 1, n, 1) = y_;
  m.block(2, 2, n, n) = A_;
  return m;
}

Eigen::MatrixXd GalileanAlgebraElement::matrix() const {
  const int n = dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 2, n + 2);
  m(1, 0) = a_t;
  m.block(2, 0, n, 1) = a_x;
  m.block(2, 1, n, 1) = a_y;
  m.block(2, 2, n, n) = a_A;
  return m;
}

GalileanAlgebraElement GalileanAlgebraElement::zero(int n) {
  return {0.0, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
}

GalileanElement compose(const GalileanElement& g, const GalileanElement& h) {
  if (g.dim() != h.dim()) throw std::invalid_argument("compose: dimension mismatch");
  return {g.t() + h.t(), g.x() + g.y() * h.t() + g.A() * h.x(), g.y() + g.A() * h.y(),
          g.A() * h.A()};
}

GalileanElement inverse(const GalileanElement& g) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(g.A());
  if (detail::lu_singular(lu))
    throw SingularMatrixError("GalileanElement inverse: GL block numerically singular");
  return {-g.t(), -lu.solve((g.x() - g.y() * g.t()).eval()), -lu.solve(g.y()), lu.inverse()};
}

GalileanAlgebraElement maurer_cartan(const GalileanElement& g, const Eigen::MatrixXd& gdot) {
  const int n = g.dim();
  if (gdot.rows() != n + 2 || gdot.cols() != n + 2)
    throw std::invalid_argument("maurer_cartan: gdot shape mismatch");
  double stray = gdot.row(0).cwiseAbs().maxCoeff();
  stray = std::max(stray, gdot.block(1, 1, 1, n + 1).cwiseAbs().maxCoeff());
  if (stray != 0.0)
    throw std::invalid_argument("maurer_cartan: gdot is not tangent to the group");

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(g.A());
  if (detail::lu_singular(lu))
    throw SingularMatrixError("maurer_cartan: GL block numerically singular");
  const double dt = gdot(1, 0);
  const Eigen::VectorXd dx = gdot.block(2, 0, n, 1);
  const Eigen::VectorXd dy = gdot.block(2, 1, n, 1);
  const Eigen::MatrixXd dA = gdot.block(2, 2, n, n);
  return {dt, lu.solve((dx - g.y() * dt).eval()), lu.solve(dy), lu.solve(dA)};
}

ModelPoint project_to_model(const GalileanElement& g) { return {g.t(), g.x(), g.y()}; }

GalileanElement embed_gauge(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  return {0.0, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), A};
}

double StraightLineVerdict::max_violation() const {
  return std::max(max_contact_violation, max_velocity_violation);
}

StraightLineVerdict is_straight_line(const std::vector<std::pair<double, ModelPoint>>& samples,
                                     double tol) {
  if (samples.size() < 3)
    throw std::invalid_argument("is_straight_line: need at least 3 samples");
  for (std::size_t k = 1; k < samples.size(); ++k)
    if (!(samples[k].first > samples[k - 1].first))
      throw std::invalid_argument("is_straight_line: parameter must be strictly increasing");

  StraightLineVerdict v;
  v.min_dt = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const ModelPoint& a = samples[k - 1].second;
    const ModelPoint& b = samples[k].second;
    const double dt = b.t - a.t;
    const Eigen::VectorXd dx = b.x - a.x;
    const Eigen::VectorXd dy = b.y - a.y;
    const Eigen::VectorXd ybar = 0.5 * (a.y + b.y);
    const double contact = (dx - ybar * dt).cwiseAbs().maxCoeff() / (1.0 + std::abs(dt));
    v.max_contact_violation = std::max(v.max_contact_violation, contact);
    v.max_velocity_violation = std::max(v.max_velocity_violation, dy.cwiseAbs().maxCoeff());
    v.min_dt = std::min(v.min_dt, std::abs(dt));
  }
  v.degenerate_dt = v.min_dt < tol;
  v.straight = !v.degenerate_dt && v.max_contact_violation <= tol &&
               v.max_velocity_violation <= tol;
  return v;
}

}  // namespace galcon
