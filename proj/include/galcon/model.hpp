#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace galcon {

/// A point of the model space J^1(R, R^n).
struct ModelPoint {
  double t = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd y;

  int dim() const { return static_cast<int>(x.size()); }
  static ModelPoint origin(int n);
};

/// Element of Gal_n: the (n+2)x(n+2) matrix
///   [ 1  0  0 ]
///   [ t  1  0 ]
///   [ x  y  A ]
/// with A invertible. Stored by blocks.
class GalileanElement {
public:
  GalileanElement(double t, Eigen::VectorXd x, Eigen::VectorXd y, Eigen::MatrixXd A);

  static GalileanElement identity(int n);
  static GalileanElement from_matrix(const Eigen::MatrixXd& m, double tol = 1e-9);

  int dim() const { return static_cast<int>(x_.size()); }
  double t() const { return t_; }
  const Eigen::VectorXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::MatrixXd& A() const { return A_; }
  Eigen::MatrixXd matrix() const;

private:
  double t_;
  Eigen::VectorXd x_, y_;
  Eigen::MatrixXd A_;
};

/// Element of gal_n: same block pattern with zero first row and (t,t) slot.
struct GalileanAlgebraElement {
  double a_t = 0.0;
  Eigen::VectorXd a_x;
  Eigen::VectorXd a_y;
  Eigen::MatrixXd a_A;

  int dim() const { return static_cast<int>(a_x.size()); }
  Eigen::MatrixXd matrix() const;
  static GalileanAlgebraElement zero(int n);
};

GalileanElement compose(const GalileanElement& g, const GalileanElement& h);
GalileanElement inverse(const GalileanElement& g);

/// g^{-1} gdot for a tangent matrix gdot at g (same sparsity as increments
/// of g: nonzero entries only in the t, x, y, A slots).
GalileanAlgebraElement maurer_cartan(const GalileanElement& g, const Eigen::MatrixXd& gdot);

ModelPoint project_to_model(const GalileanElement& g);

/// The H-element with GL-block A (t = x = y = 0).
GalileanElement embed_gauge(const Eigen::MatrixXd& A);

struct StraightLineVerdict {
  bool straight = false;
  double max_contact_violation = 0.0;   // |dx - y dt| test, scaled
  double max_velocity_violation = 0.0;  // |dy| test
  double min_dt = 0.0;
  bool degenerate_dt = false;

  double max_violation() const;
};

/// Verdict on sampled model-space data: over every consecutive pair,
/// |dx - ybar dt| <= tol (1 + |dt|), |dy| <= tol, and |dt| >= tol, with ybar
/// the midpoint velocity. Requires at least 3 samples.
StraightLineVerdict is_straight_line(const std::vector<std::pair<double, ModelPoint>>& samples,
                                     double tol);

}  // namespace galcon
