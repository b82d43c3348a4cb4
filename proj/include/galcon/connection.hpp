#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "galcon/expr.hpp"
#include "galcon/forms.hpp"

namespace galcon {

using ExprMatrix = std::vector<std::vector<Expr>>;
using ExprCube = std::vector<std::vector<std::vector<Expr>>>;

ExprMatrix zero_expr_matrix(int n);
ExprCube zero_expr_cube(int n);

/// The system x_i'' + Gamma_i(t, x, x') = 0.
struct SecondOrderSystem {
  int n = 0;
  std::vector<Expr> gamma;

  void validate() const;
};

/// The normalization data: D fixes the phi forms, the symmetric part of Q
/// fixes the Pi forms. Defaults are all-zero (the Chern choice).
struct NormalizationChoice {
  ExprMatrix D;
  ExprCube Qsym;

  static NormalizationChoice zero(int n);
  void validate(int n) const;  // shapes and structural Qsym symmetry
};

/// The Galilean Cartan connection in the gauge A = I:
///   tau    = dt
///   omega^i = dx^i - y^i dt
///   phi^i   = dy^i + Gamma^i dt + N^i_k omega^k
///   Pi^i_j  = N^i_j dt + GammaAffine^i_{jk} omega^k
struct GalileanConnection {
  int n = 0;
  std::vector<Expr> gamma;
  ExprMatrix N;
  ExprCube gamma_affine;  // symmetric in the last two indices
  DifferentialForm tau{1, 1};
  std::vector<DifferentialForm> omega;
  std::vector<DifferentialForm> phi;
  std::vector<std::vector<DifferentialForm>> pi;
  NormalizationChoice normalization;
};

GalileanConnection build_connection(const SecondOrderSystem& sys,
                                    const NormalizationChoice& norm);

/// build_connection with D = 0 and Qsym = 0: the unique normal connection
/// with Phi = 0 (mod omega).
GalileanConnection chern_connection(const SecondOrderSystem& sys);

struct CurvatureForms {
  DifferentialForm T{1, 2};                    // d tau
  std::vector<DifferentialForm> Omega;         // d omega + Pi^omega + phi^tau
  std::vector<DifferentialForm> Phi;           // d phi + Pi^phi
  std::vector<std::vector<DifferentialForm>> R;  // d Pi + Pi^Pi
};

CurvatureForms curvature(const GalileanConnection& conn);

/// Pointwise tensors read off the decomposition
///   Phi^i = D^i_j tau^phi^j + Q^i_{jk} omega^j^phi^k
///         + P^i_j tau^omega^j + 1/2 T^i_{jk} omega^j^omega^k.
struct CurvatureInvariants {
  Eigen::MatrixXd D;
  Eigen::MatrixXd P;
  std::vector<Eigen::MatrixXd> Q;      // Q[i](j,k)
  std::vector<Eigen::MatrixXd> Ttors;  // Ttors[i](j,k), antisymmetric in (j,k)
  double phi_phi_max = 0.0;            // residual in the phi^phi slots

  Eigen::MatrixXd Qsym(int i) const;   // symmetric part of Q[i]
  double max_abs() const;
};

AdaptedCoframe coframe(const GalileanConnection& conn);

AdaptedTwoForm to_adapted_basis(const DifferentialForm& a, const GalileanConnection& conn,
                                const ChartPoint& p);

CurvatureInvariants extract_invariants(const GalileanConnection& conn, const CurvatureForms& curv,
                                       const ChartPoint& p,
                                       const Eigen::MatrixXd* gauge = nullptr);
CurvatureInvariants extract_invariants(const GalileanConnection& conn, const ChartPoint& p);

/// Dress the invariants with a constant GL gauge: one inverse factor on the
/// upper index, one plain factor on each lower index.
CurvatureInvariants gauge_transform(const CurvatureInvariants& inv, const Eigen::MatrixXd& A);

struct StructureReport {
  double tol = 0.0;
  double max_dtau = 0.0;
  double max_omega_eq = 0.0;
  double max_phi_oracle = 0.0;
  double max_phi_phi = 0.0;
  int points_evaluated = 0;
  std::vector<std::string> point_errors;  // per-point domain errors, non-fatal

  double max_residual() const;
  bool passed() const { return passed(tol); }
  bool passed(double at_tol) const;
};

/// Evaluate the normality residuals at each point: d tau, the Omega structure
/// equation, the symbolic Phi against a finite-difference exterior-derivative
/// oracle, and the phi^phi slots of Phi. Point-level evaluation errors are
/// recorded, not fatal. Aggregation is a max-reduction, so the report does
/// not depend on point ordering.
StructureReport verify_structure_equations(const GalileanConnection& conn,
                                           const std::vector<ChartPoint>& points, double tol);

/// Central finite-difference d of a 1-form, as an antisymmetric matrix over
/// coordinate components: (d a)_{mu nu} ~ d_mu a_nu - d_nu a_mu. Test oracle;
/// independent of the symbolic exterior_derivative path.
Eigen::MatrixXd numeric_exterior_derivative(const DifferentialForm& a, const ChartPoint& p,
                                            double step = 1e-5);

}  // namespace galcon
