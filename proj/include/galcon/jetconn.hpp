#pragma once

#include <vector>

#include "galcon/connection.hpp"
#include "galcon/expr.hpp"

namespace galcon {

/// Nonlinear connection on T J^1: a semispray Gamma plus a free choice of
/// horizontal coefficients N. The affine coefficients enter the covariant
/// derivative table; they default to zero and are wired from the Cartan
/// side for cross-checks.
struct NonlinearConnection {
  int n = 0;
  std::vector<Expr> gamma;
  ExprMatrix Nfield;
  ExprCube gamma_affine;

  static NonlinearConnection make(int n, std::vector<Expr> gamma, ExprMatrix Nfield);
};

/// The choice N = 1/2 dGamma/dy.
NonlinearConnection chern_nonlinear(const SecondOrderSystem& sys);

/// Copy Gamma, N, and the affine coefficients from a Cartan connection.
NonlinearConnection from_cartan(const GalileanConnection& conn);

/// Vector field in the adapted frame
///   e_0 = d/dt = d_t + y^j d_{x^j} - Gamma^j d_{y^j}
///   e_j = delta/delta x^j = d_{x^j} - N^k_j d_{y^k}      (1 <= j <= n)
///   e_{n+j} = d/d y^j
/// with Expression coefficients.
struct AdaptedVectorField {
  int n = 0;
  std::vector<Expr> comp;  // size 2n+1, frame order as above

  static AdaptedVectorField zero(int n);
  AdaptedVectorField simplified() const;
};

/// Frame index helpers: 0 is d/dt, 1..n the horizontal fields, n+1..2n the
/// verticals.
inline int frame_dt() { return 0; }
inline int frame_delta_x(int j) { return j; }
inline int frame_dy(int j, int n) { return n + j; }

AdaptedVectorField frame_field(int n, int frame_index);

/// Components over the coordinate frame d_t, d_{x^j}, d_{y^j}.
std::vector<Expr> to_coordinate_frame(const AdaptedVectorField& v,
                                      const NonlinearConnection& conn);
AdaptedVectorField from_coordinate_frame(const std::vector<Expr>& coord,
                                         const NonlinearConnection& conn);

AdaptedVectorField commutator(const AdaptedVectorField& u, const AdaptedVectorField& v,
                              const NonlinearConnection& conn);

/// The gal_n covariant derivative on adapted frame fields:
///   grad of d/dt in any direction = 0
///   grad_{d/dt} delta_k = N^j_k delta_j        grad_{delta_j} delta_k = GammaAffine^l_{jk} delta_l
///   grad_{dy_k} delta_j = 0                    grad_{d/dt} dy_k = N^j_k dy_j
///   grad_{delta_j} dy_k = 0                    grad_{dy_j} dy_k = GammaAffine^l_{jk} dy_l
AdaptedVectorField covariant_derivative(int X_frame, int Y_frame,
                                        const NonlinearConnection& conn);

/// grad_X Y - grad_Y X - [X, Y] on frame fields, in the adapted frame.
AdaptedVectorField torsion(int X_frame, int Y_frame, const NonlinearConnection& conn);

/// Evaluate the components of an adapted field at a point.
Eigen::VectorXd evaluate_components(const AdaptedVectorField& v, const ChartPoint& p);

}  // namespace galcon
