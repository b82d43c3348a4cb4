#include "galcon/jetconn.hpp"

#include <stdexcept>

namespace galcon {

NonlinearConnection NonlinearConnection::make(int n, std::vector<Expr> gamma, ExprMatrix Nfield) {
  NonlinearConnection conn;
  conn.n = n;
  conn.gamma = std::move(gamma);
  conn.Nfield = std::move(Nfield);
  conn.gamma_affine = zero_expr_cube(n);
  return conn;
}

NonlinearConnection chern_nonlinear(const SecondOrderSystem& sys) {
  sys.validate();
  ExprMatrix N = zero_expr_matrix(sys.n);
  for (int i = 0; i < sys.n; ++i)
    for (int j = 0; j < sys.n; ++j)
      N[i][j] = simplify(constant(0.5) * differentiate(sys.gamma[i], var_y(j + 1)));
  return NonlinearConnection::make(sys.n, sys.gamma, std::move(N));
}

NonlinearConnection from_cartan(const GalileanConnection& conn) {
  NonlinearConnection out;
  out.n = conn.n;
  out.gamma = conn.gamma;
  out.Nfield = conn.N;
  out.gamma_affine = conn.gamma_affine;
  return out;
}

AdaptedVectorField AdaptedVectorField::zero(int n) {
  return {n, std::vector<Expr>(2 * n + 1, constant(0.0))};
}

AdaptedVectorField AdaptedVectorField::simplified() const {
  AdaptedVectorField out{n, comp};
  for (Expr& c : out.comp) c = simplify(c);
  return out;
}

AdaptedVectorField frame_field(int n, int frame_index) {
  if (frame_index < 0 || frame_index > 2 * n)
    throw std::invalid_argument("frame index out of range");
  AdaptedVectorField v = AdaptedVectorField::zero(n);
  v.comp[frame_index] = constant(1.0);
  return v;
}

std::vector<Expr> to_coordinate_frame(const AdaptedVectorField& v,
                                      const NonlinearConnection& conn) {
  const int n = conn.n;
  if (v.n != n) throw std::invalid_argument("to_coordinate_frame: dimension mismatch");
  std::vector<Expr> coord(2 * n + 1, constant(0.0));
  const Expr& a0 = v.comp[0];
  coord[0] = a0;
  for (int j = 0; j < n; ++j) {
    // d/dt contributes y^j, the horizontal field contributes the unit slot.
    coord[1 + j] = simplify(a0 * variable(var_y(j + 1)) + v.comp[1 + j]);
  }
  for (int j = 0; j < n; ++j) {
    Expr c = v.comp[1 + n + j] - a0 * conn.gamma[j];
    for (int k = 0; k < n; ++k) c = c - v.comp[1 + k] * conn.Nfield[j][k];
    coord[1 + n + j] = simplify(c);
  }
  return coord;
}

AdaptedVectorField from_coordinate_frame(const std::vector<Expr>& coord,
                                         const NonlinearConnection& conn) {
  const int n = conn.n;
  if (static_cast<int>(coord.size()) != 2 * n + 1)
    throw std::invalid_argument("from_coordinate_frame: wrong component count");
  AdaptedVectorField v = AdaptedVectorField::zero(n);
  const Expr& c0 = coord[0];
  v.comp[0] = c0;
  std::vector<Expr> horizontal(n);
  for (int j = 0; j < n; ++j) {
    horizontal[j] = simplify(coord[1 + j] - c0 * variable(var_y(j + 1)));
    v.comp[1 + j] = horizontal[j];
  }
  for (int j = 0; j < n; ++j) {
    Expr c = coord[1 + n + j] + c0 * conn.gamma[j];
    for (int k = 0; k < n; ++k) c = c + horizontal[k] * conn.Nfield[j][k];
    v.comp[1 + n + j] = simplify(c);
  }
  return v;
}

AdaptedVectorField commutator(const AdaptedVectorField& u, const AdaptedVectorField& v,
                              const NonlinearConnection& conn) {
  const int n = conn.n;
  const std::vector<Expr> uc = to_coordinate_frame(u, conn);
  const std::vector<Expr> vc = to_coordinate_frame(v, conn);
  std::vector<Expr> bracket(2 * n + 1, constant(0.0));
  for (int mu = 0; mu <= 2 * n; ++mu) {
    Expr acc = constant(0.0);
    for (int nu = 0; nu <= 2 * n; ++nu) {
      const Variable w = coordinate_variable(nu, n);
      acc = acc + uc[nu] * differentiate(vc[mu], w) - vc[nu] * differentiate(uc[mu], w);
    }
    bracket[mu] = simplify(acc);
  }
  return from_coordinate_frame(bracket, conn);
}

AdaptedVectorField covariant_derivative(int X_frame, int Y_frame,
                                        const NonlinearConnection& conn) {
  const int n = conn.n;
  if (X_frame < 0 || X_frame > 2 * n || Y_frame < 0 || Y_frame > 2 * n)
    throw std::invalid_argument("covariant_derivative: frame index out of range");
  AdaptedVectorField out = AdaptedVectorField::zero(n);

  if (Y_frame == 0) return out;  // grad of d/dt vanishes in every direction

  const bool y_horizontal = Y_frame <= n;
  const int k = y_horizontal ? Y_frame - 1 : Y_frame - n - 1;

  if (X_frame == 0) {
    // grad_{d/dt}: N^j_k times the matching frame block.
    for (int j = 0; j < n; ++j)
      out.comp[(y_horizontal ? 1 : 1 + n) + j] = conn.Nfield[j][k];
    return out;
  }
  if (X_frame <= n) {
    const int j = X_frame - 1;
    if (y_horizontal) {
      for (int l = 0; l < n; ++l) out.comp[1 + l] = conn.gamma_affine[l][j][k];
    }
    // grad_{delta_j} dy_k = 0
    return out;
  }
  const int j = X_frame - n - 1;
  if (!y_horizontal) {
    for (int l = 0; l < n; ++l) out.comp[1 + n + l] = conn.gamma_affine[l][j][k];
  }
  // grad_{dy_k} delta_j = 0
  return out;
}

AdaptedVectorField torsion(int X_frame, int Y_frame, const NonlinearConnection& conn) {
  const AdaptedVectorField cov_xy = covariant_derivative(X_frame, Y_frame, conn);
  const AdaptedVectorField cov_yx = covariant_derivative(Y_frame, X_frame, conn);
  const AdaptedVectorField bracket =
      commutator(frame_field(conn.n, X_frame), frame_field(conn.n, Y_frame), conn);
  AdaptedVectorField out = AdaptedVectorField::zero(conn.n);
  for (std::size_t m = 0; m < out.comp.size(); ++m)
    out.comp[m] = simplify(cov_xy.comp[m] - cov_yx.comp[m] - bracket.comp[m]);
  return out;
}

Eigen::VectorXd evaluate_components(const AdaptedVectorField& v, const ChartPoint& p) {
  Eigen::VectorXd out(v.comp.size());
  for (std::size_t i = 0; i < v.comp.size(); ++i) out(i) = evaluate(v.comp[i], p);
  return out;
}

}  // namespace galcon
