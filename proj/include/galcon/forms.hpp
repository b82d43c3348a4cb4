#pragma once

#include <Eigen/Dense>

#include <map>
#include <vector>

#include "galcon/expr.hpp"

namespace galcon {

/// Tangent vector at a chart point, components ordered like the coordinates.
struct TangentVector {
  double vt = 0.0;
  Eigen::VectorXd vx;
  Eigen::VectorXd vy;

  int dim() const { return static_cast<int>(vx.size()); }
  double component(int index) const;
  Eigen::VectorXd flat() const;
  static TangentVector zero(int n);
  static TangentVector from_flat(const Eigen::VectorXd& v);
};

/// Differential form of degree 0..3 on the (2n+1)-chart, stored over the
/// coordinate coframe dt, dx1..dxn, dy1..dyn with Expression coefficients.
/// Keys are strictly increasing index tuples; an absent key is a zero
/// coefficient.
class DifferentialForm {
public:
  DifferentialForm(int n, int degree);

  static DifferentialForm dt(int n);
  static DifferentialForm dx(int n, int i);
  static DifferentialForm dy(int n, int i);
  static DifferentialForm coordinate(int n, int index);
  static DifferentialForm scalar(int n, Expr f);

  int dimension() const { return n_; }
  int degree() const { return degree_; }
  int coords() const { return 2 * n_ + 1; }

  const std::map<std::vector<int>, Expr>& terms() const { return terms_; }
  Expr coefficient(std::vector<int> key) const;

  /// Accumulate c into the slot for key (indices in any order, sign handled).
  void add_term(std::vector<int> key, Expr c);

  DifferentialForm simplified() const;
  bool is_structurally_zero() const { return terms_.empty(); }

private:
  int n_;
  int degree_;
  std::map<std::vector<int>, Expr> terms_;
};

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm operator*(const Expr& f, const DifferentialForm& a);
DifferentialForm operator*(double c, const DifferentialForm& a);

/// Graded-antisymmetric product; throws if the degrees sum past 3.
DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);

/// d, via symbolic partials of the coefficients. Input degree at most 2.
DifferentialForm exterior_derivative(const DifferentialForm& a);

double evaluate_zero_form(const DifferentialForm& a, const ChartPoint& p);
double evaluate_one_form(const DifferentialForm& a, const ChartPoint& p, const TangentVector& u);
double evaluate_two_form(const DifferentialForm& a, const ChartPoint& p, const TangentVector& u,
                         const TangentVector& v);

/// Components of a 1-form over the coordinate coframe at p.
Eigen::VectorXd one_form_components(const DifferentialForm& a, const ChartPoint& p);

/// Antisymmetric matrix W with a(u,v) = u^T W v, over coordinate components.
Eigen::MatrixXd two_form_matrix(const DifferentialForm& a, const ChartPoint& p);

/// Max |coefficient| over all stored terms, evaluated at p.
double max_abs_coefficient(const DifferentialForm& a, const ChartPoint& p);

/// The gauge coframe tau, omega^i, phi^i of a Galilean connection.
struct AdaptedCoframe {
  DifferentialForm tau;
  std::vector<DifferentialForm> omega;
  std::vector<DifferentialForm> phi;

  int dimension() const { return static_cast<int>(omega.size()); }
};

/// Pointwise coefficients of a 2-form over the adapted basis
/// {tau^omega^j, tau^phi^j, omega^j^omega^k (j<k), omega^j^phi^k (all j,k),
///  phi^j^phi^k (j<k)}. The omega_omega and phi_phi blocks are stored as
/// full antisymmetric matrices.
struct AdaptedTwoForm {
  Eigen::VectorXd tau_omega;
  Eigen::VectorXd tau_phi;
  Eigen::MatrixXd omega_omega;
  Eigen::MatrixXd omega_phi;
  Eigen::MatrixXd phi_phi;
};

/// Decompose a 2-form over the adapted coframe at p by a pointwise linear
/// solve (partial pivoting; the coframe is reported singular when the pivot
/// ratio falls below 1e-12). If gauge is non-null the omega and phi rows are
/// premultiplied by gauge^{-1} first.
AdaptedTwoForm to_adapted_basis(const DifferentialForm& a, const AdaptedCoframe& cf,
                                const ChartPoint& p, const Eigen::MatrixXd* gauge = nullptr);

}  // namespace galcon
