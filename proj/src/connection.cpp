#include "galcon/connection.hpp"

#include "lu_guard.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace galcon {

ExprMatrix zero_expr_matrix(int n) {
  return ExprMatrix(n, std::vector<Expr>(n, constant(0.0)));
}

ExprCube zero_expr_cube(int n) {
  return ExprCube(n, ExprMatrix(n, std::vector<Expr>(n, constant(0.0))));
}

void SecondOrderSystem::validate() const {
  if (n < 1) throw std::invalid_argument("system dimension must be positive");
  if (static_cast<int>(gamma.size()) != n)
    throw std::invalid_argument("system must supply exactly n Gamma components");
  for (const Expr& g : gamma)
    if (max_variable_index(g) > n)
      throw std::invalid_argument("Gamma references a variable index beyond n");
}

NormalizationChoice NormalizationChoice::zero(int n) {
  return {zero_expr_matrix(n), zero_expr_cube(n)};
}

void NormalizationChoice::validate(int n) const {
  auto check_index = [n](const Expr& e) {
    if (max_variable_index(e) > n)
      throw std::invalid_argument("normalization references a variable index beyond n");
  };
  if (static_cast<int>(D.size()) != n) throw std::invalid_argument("D must be n x n");
  for (const auto& row : D) {
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("D must be n x n");
    for (const auto& e : row) check_index(e);
  }
  if (static_cast<int>(Qsym.size()) != n) throw std::invalid_argument("Qsym must be n x n x n");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(Qsym[i].size()) != n)
      throw std::invalid_argument("Qsym must be n x n x n");
    for (int j = 0; j < n; ++j) {
      if (static_cast<int>(Qsym[i][j].size()) != n)
        throw std::invalid_argument("Qsym must be n x n x n");
      for (const auto& e : Qsym[i][j]) check_index(e);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (!structurally_equal(Qsym[i][j][k], Qsym[i][k][j]))
          throw std::invalid_argument("Qsym symmetry violation at (" + std::to_string(i + 1) +
                                      "," + std::to_string(j + 1) + "," + std::to_string(k + 1) +
                                      ")");
}

GalileanConnection build_connection(const SecondOrderSystem& sys,
                                    const NormalizationChoice& norm) {
  sys.validate();
  norm.validate(sys.n);
  const int n = sys.n;

  GalileanConnection conn;
  conn.n = n;
  conn.gamma = sys.gamma;
  conn.normalization = norm;

  // N^i_j = 1/2 (dGamma^i/dy^j + D^i_j)
  conn.N = zero_expr_matrix(n);
  ExprMatrix dgamma_dy = zero_expr_matrix(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      dgamma_dy[i][j] = differentiate(sys.gamma[i], var_y(j + 1));
      conn.N[i][j] = simplify(constant(0.5) * (dgamma_dy[i][j] + norm.D[i][j]));
    }

  // GammaAffine^l_{rs} = Qsym^l_{rs} + 1/2 d2Gamma^l/dy^r dy^s
  //                    + 1/4 (dD^l_r/dy^s + dD^l_s/dy^r)
  conn.gamma_affine = zero_expr_cube(n);
  for (int l = 0; l < n; ++l)
    for (int r = 0; r < n; ++r)
      for (int s = r; s < n; ++s) {
        Expr d2 = differentiate(dgamma_dy[l][r], var_y(s + 1));
        Expr dD = differentiate(norm.D[l][r], var_y(s + 1)) +
                  differentiate(norm.D[l][s], var_y(r + 1));
        Expr value = simplify(norm.Qsym[l][r][s] + constant(0.5) * d2 + constant(0.25) * dD);
        conn.gamma_affine[l][r][s] = value;
        conn.gamma_affine[l][s][r] = value;
      }

  conn.tau = DifferentialForm::dt(n);
  conn.omega.reserve(n);
  for (int i = 1; i <= n; ++i)
    conn.omega.push_back(DifferentialForm::dx(n, i) -
                         variable(var_y(i)) * DifferentialForm::dt(n));

  conn.phi.reserve(n);
  for (int i = 0; i < n; ++i) {
    DifferentialForm f = DifferentialForm::dy(n, i + 1) + sys.gamma[i] * DifferentialForm::dt(n);
    for (int k = 0; k < n; ++k) f = f + conn.N[i][k] * conn.omega[k];
    conn.phi.push_back(f.simplified());
  }

  conn.pi.assign(n, std::vector<DifferentialForm>());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      DifferentialForm f = conn.N[i][j] * DifferentialForm::dt(n);
      for (int k = 0; k < n; ++k) f = f + conn.gamma_affine[i][j][k] * conn.omega[k];
      conn.pi[i].push_back(f.simplified());
    }
  }
  return conn;
}

GalileanConnection chern_connection(const SecondOrderSystem& sys) {
  return build_connection(sys, NormalizationChoice::zero(sys.n));
}

CurvatureForms curvature(const GalileanConnection& conn) {
  const int n = conn.n;
  CurvatureForms curv;
  curv.T = exterior_derivative(conn.tau).simplified();

  curv.Omega.reserve(n);
  for (int i = 0; i < n; ++i) {
    DifferentialForm f = exterior_derivative(conn.omega[i]);
    for (int j = 0; j < n; ++j) f = f + wedge(conn.pi[i][j], conn.omega[j]);
    f = f + wedge(conn.phi[i], conn.tau);
    curv.Omega.push_back(f.simplified());
  }

  curv.Phi.reserve(n);
  for (int i = 0; i < n; ++i) {
    DifferentialForm f = exterior_derivative(conn.phi[i]);
    for (int j = 0; j < n; ++j) f = f + wedge(conn.pi[i][j], conn.phi[j]);
    curv.Phi.push_back(f.simplified());
  }

  curv.R.assign(n, std::vector<DifferentialForm>());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      DifferentialForm f = exterior_derivative(conn.pi[i][j]);
      for (int k = 0; k < n; ++k) f = f + wedge(conn.pi[i][k], conn.pi[k][j]);
      curv.R[i].push_back(f.simplified());
    }
  }
  return curv;
}

Eigen::MatrixXd CurvatureInvariants::Qsym(int i) const {
  return 0.5 * (Q[i] + Q[i].transpose());
}

double CurvatureInvariants::max_abs() const {
  double m = std::max(D.cwiseAbs().maxCoeff(), P.cwiseAbs().maxCoeff());
  for (const auto& q : Q) m = std::max(m, q.cwiseAbs().maxCoeff());
  for (const auto& tt : Ttors) m = std::max(m, tt.cwiseAbs().maxCoeff());
  return m;
}

AdaptedCoframe coframe(const GalileanConnection& conn) {
  return {conn.tau, conn.omega, conn.phi};
}

AdaptedTwoForm to_adapted_basis(const DifferentialForm& a, const GalileanConnection& conn,
                                const ChartPoint& p) {
  return to_adapted_basis(a, coframe(conn), p);
}

CurvatureInvariants extract_invariants(const GalileanConnection& conn, const CurvatureForms& curv,
                                       const ChartPoint& p, const Eigen::MatrixXd* gauge) {
  const int n = conn.n;
  CurvatureInvariants inv;
  inv.D.resize(n, n);
  inv.P.resize(n, n);
  inv.Q.assign(n, Eigen::MatrixXd());
  inv.Ttors.assign(n, Eigen::MatrixXd());

  const AdaptedCoframe cf = coframe(conn);
  std::vector<AdaptedTwoForm> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) rows.push_back(to_adapted_basis(curv.Phi[i], cf, p, gauge));

  // With a gauge the curvature itself picks up one inverse factor on the
  // upper index: Phi -> A^{-1} Phi.
  Eigen::MatrixXd mix = Eigen::MatrixXd::Identity(n, n);
  if (gauge != nullptr) mix = gauge->partialPivLu().inverse();

  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd tau_phi = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd tau_omega = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd omega_phi = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd omega_omega = Eigen::MatrixXd::Zero(n, n);
    double phiphi = 0.0;
    for (int l = 0; l < n; ++l) {
      tau_phi += mix(i, l) * rows[l].tau_phi;
      tau_omega += mix(i, l) * rows[l].tau_omega;
      omega_phi += mix(i, l) * rows[l].omega_phi;
      omega_omega += mix(i, l) * rows[l].omega_omega;
      phiphi = std::max(phiphi, rows[l].phi_phi.cwiseAbs().maxCoeff());
    }
    inv.D.row(i) = tau_phi.transpose();
    inv.P.row(i) = tau_omega.transpose();
    inv.Q[i] = omega_phi;
    inv.Ttors[i] = omega_omega;
    inv.phi_phi_max = std::max(inv.phi_phi_max, phiphi);
  }
  return inv;
}

CurvatureInvariants extract_invariants(const GalileanConnection& conn, const ChartPoint& p) {
  return extract_invariants(conn, curvature(conn), p);
}

CurvatureInvariants gauge_transform(const CurvatureInvariants& inv, const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  if (detail::lu_singular(lu)) throw SingularMatrixError("gauge_transform: singular gauge");
  const Eigen::MatrixXd Ainv = lu.inverse();

  CurvatureInvariants out;
  out.phi_phi_max = inv.phi_phi_max;
  out.D = Ainv * inv.D * A;
  out.P = Ainv * inv.P * A;
  out.Q.assign(n, Eigen::MatrixXd::Zero(n, n));
  out.Ttors.assign(n, Eigen::MatrixXd::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      out.Q[i] += Ainv(i, l) * (A.transpose() * inv.Q[l] * A);
      out.Ttors[i] += Ainv(i, l) * (A.transpose() * inv.Ttors[l] * A);
    }
  }
  return out;
}

double StructureReport::max_residual() const {
  return std::max({max_dtau, max_omega_eq, max_phi_oracle, max_phi_phi});
}

bool StructureReport::passed(double at_tol) const { return max_residual() <= at_tol; }

Eigen::MatrixXd numeric_exterior_derivative(const DifferentialForm& a, const ChartPoint& p,
                                            double step) {
  if (a.degree() != 1) throw std::invalid_argument("numeric_exterior_derivative: 1-forms only");
  const int m = a.coords();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
  for (const auto& [key, c] : a.terms()) {
    const int nu = key[0];
    for (int mu = 0; mu < m; ++mu) {
      if (mu == nu) continue;
      const double dmu =
          (evaluate(c, p.shifted(mu, step)) - evaluate(c, p.shifted(mu, -step))) / (2.0 * step);
      w(mu, nu) += dmu;
      w(nu, mu) -= dmu;
    }
  }
  return w;
}

StructureReport verify_structure_equations(const GalileanConnection& conn,
                                           const std::vector<ChartPoint>& points, double tol) {
  if (points.empty())
    throw std::invalid_argument("verify_structure_equations: need at least one point");
  const int n = conn.n;
  const CurvatureForms curv = curvature(conn);
  const AdaptedCoframe cf = coframe(conn);

  StructureReport report;
  report.tol = tol;
  for (const ChartPoint& p : points) {
    try {
      double dtau = max_abs_coefficient(curv.T, p);
      double omega_eq = 0.0;
      for (int i = 0; i < n; ++i)
        omega_eq = std::max(omega_eq, max_abs_coefficient(curv.Omega[i], p));

      // Oracle route for Phi^i: finite-difference d of phi^i plus the wedge
      // term assembled from pointwise 1-form values.
      double phi_oracle = 0.0;
      for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd oracle = numeric_exterior_derivative(conn.phi[i], p);
        for (int j = 0; j < n; ++j) {
          const Eigen::VectorXd pi_c = one_form_components(conn.pi[i][j], p);
          const Eigen::VectorXd phi_c = one_form_components(conn.phi[j], p);
          oracle += pi_c * phi_c.transpose() - phi_c * pi_c.transpose();
        }
        const Eigen::MatrixXd symbolic = two_form_matrix(curv.Phi[i], p);
        phi_oracle = std::max(phi_oracle, (symbolic - oracle).cwiseAbs().maxCoeff());
      }

      double phi_phi = 0.0;
      for (int i = 0; i < n; ++i)
        phi_phi = std::max(phi_phi, to_adapted_basis(curv.Phi[i], cf, p)
                                        .phi_phi.cwiseAbs()
                                        .maxCoeff());

      report.max_dtau = std::max(report.max_dtau, dtau);
      report.max_omega_eq = std::max(report.max_omega_eq, omega_eq);
      report.max_phi_oracle = std::max(report.max_phi_oracle, phi_oracle);
      report.max_phi_phi = std::max(report.max_phi_phi, phi_phi);
      ++report.points_evaluated;
    } catch (const EvalDomainError& err) {
      report.point_errors.push_back(err.what());
    } catch (const SingularMatrixError& err) {
      report.point_errors.push_back(err.what());
    }
  }
  return report;
}

}  // namespace galcon
