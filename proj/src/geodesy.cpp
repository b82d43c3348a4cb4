#include "galcon/geodesy.hpp"

#include "lu_guard.hpp"

#include <cmath>

namespace galcon {

namespace {

Eigen::VectorXd gamma_at(const SecondOrderSystem& sys, const ChartPoint& p) {
  Eigen::VectorXd g(sys.n);
  for (int i = 0; i < sys.n; ++i) g(i) = evaluate(sys.gamma[i], p);
  return g;
}

ChartPoint advance(const ChartPoint& p, double dt, const Eigen::VectorXd& dx,
                   const Eigen::VectorXd& dy) {
  return {p.t + dt, p.x + dx, p.y + dy};
}

bool finite(const ChartPoint& p) {
  return std::isfinite(p.t) && p.x.allFinite() && p.y.allFinite();
}

// One RK4 step of p' = field(s, p).
ChartPoint rk4_point_step(const TangentField& field, double s, const ChartPoint& p, double h) {
  const TangentVector k1 = field(s, p);
  const TangentVector k2 =
      field(s + 0.5 * h, advance(p, 0.5 * h * k1.vt, 0.5 * h * k1.vx, 0.5 * h * k1.vy));
  const TangentVector k3 =
      field(s + 0.5 * h, advance(p, 0.5 * h * k2.vt, 0.5 * h * k2.vx, 0.5 * h * k2.vy));
  const TangentVector k4 = field(s + h, advance(p, h * k3.vt, h * k3.vx, h * k3.vy));
  return advance(p, h / 6.0 * (k1.vt + 2.0 * k2.vt + 2.0 * k3.vt + k4.vt),
                 h / 6.0 * (k1.vx + 2.0 * k2.vx + 2.0 * k3.vx + k4.vx),
                 h / 6.0 * (k1.vy + 2.0 * k2.vy + 2.0 * k3.vy + k4.vy));
}

}  // namespace

TangentField geodesic_field(const SecondOrderSystem& sys) {
  return [sys](double, const ChartPoint& p) -> TangentVector {
    return {1.0, p.y, -gamma_at(sys, p)};
  };
}

CurveSamples integrate_geodesic(const SecondOrderSystem& sys, const ChartPoint& init,
                                double s_end, double h) {
  sys.validate();
  if (!(h > 0.0)) throw std::invalid_argument("integrate_geodesic: step must be positive");
  const auto steps = static_cast<long long>(std::llround((s_end - init.t) / h));
  if (steps < 0) throw std::invalid_argument("integrate_geodesic: s_end before init.t");

  const TangentField field = geodesic_field(sys);
  CurveSamples out;
  out.step = h;
  out.s.reserve(steps + 1);
  out.points.reserve(steps + 1);
  out.s.push_back(init.t);
  out.points.push_back(init);

  ChartPoint p = init;
  for (long long k = 0; k < steps; ++k) {
    const double s = init.t + static_cast<double>(k) * h;
    ChartPoint q;
    try {
      q = rk4_point_step(field, s, p, h);
    } catch (const EvalDomainError& err) {
      out.truncated = true;
      out.truncation_reason = err.what();
      break;
    }
    q.t = init.t + static_cast<double>(k + 1) * h;  // t is the parameter
    if (!finite(q)) {
      out.truncated = true;
      out.truncation_reason = "state became nonfinite (blow-up)";
      break;
    }
    out.s.push_back(q.t);
    out.points.push_back(q);
    p = q;
  }
  return out;
}

CurveSamples sample_curve(const std::function<ChartPoint(double)>& path, double s0, double s_end,
                          double h) {
  if (!(h > 0.0)) throw std::invalid_argument("sample_curve: step must be positive");
  const auto steps = static_cast<long long>(std::llround((s_end - s0) / h));
  CurveSamples out;
  out.step = h;
  for (long long k = 0; k <= steps; ++k) {
    const double s = s0 + static_cast<double>(k) * h;
    out.s.push_back(s);
    out.points.push_back(path(s));
  }
  return out;
}

std::vector<std::pair<double, ModelPoint>> DevelopmentResult::projected() const {
  std::vector<std::pair<double, ModelPoint>> out;
  out.reserve(samples.size());
  for (const auto& ds : samples) out.emplace_back(ds.s, ds.q);
  return out;
}

namespace {

// Connection form on the tangent v at p, through the constant section with
// GL block A (pass nullptr for A = I): the gal_n element
//   (tau(v), A^{-1} omega(v), A^{-1} phi(v), A^{-1} Pi(v) A).
Eigen::MatrixXd connection_value(const GalileanConnection& conn, const ChartPoint& p,
                                 const TangentVector& v, const Eigen::MatrixXd* A,
                                 const Eigen::PartialPivLU<Eigen::MatrixXd>* Alu) {
  const int n = conn.n;
  GalileanAlgebraElement xi = GalileanAlgebraElement::zero(n);
  xi.a_t = evaluate_one_form(conn.tau, p, v);
  for (int i = 0; i < n; ++i) {
    xi.a_x(i) = evaluate_one_form(conn.omega[i], p, v);
    xi.a_y(i) = evaluate_one_form(conn.phi[i], p, v);
    for (int j = 0; j < n; ++j) xi.a_A(i, j) = evaluate_one_form(conn.pi[i][j], p, v);
  }
  if (A != nullptr) {
    xi.a_x = Alu->solve(xi.a_x);
    xi.a_y = Alu->solve(xi.a_y);
    xi.a_A = Alu->solve((xi.a_A * (*A)).eval());
  }
  return xi.matrix();
}

DevelopmentResult develop_impl(const GalileanConnection& conn, const CurveSamples& curve,
                               const TangentField& tangent, const Eigen::MatrixXd* A) {
  if (curve.size() < 1) throw std::invalid_argument("develop: empty curve");
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    const double ds = curve.s[k + 1] - curve.s[k];
    if (!(ds > 0.0) || std::abs(ds - curve.step) > 1e-12 * (1.0 + std::abs(curve.s[k + 1])))
      throw std::invalid_argument("develop: curve samples are not uniformly spaced");
  }
  const int n = conn.n;
  const int m = n + 2;

  Eigen::PartialPivLU<Eigen::MatrixXd> Alu;
  if (A != nullptr) {
    Alu.compute(*A);
    if (detail::lu_singular(Alu)) throw SingularMatrixError("develop: singular gauge");
  }
  auto xi_at = [&](double s, const ChartPoint& p) {
    return connection_value(conn, p, tangent(s, p), A, A ? &Alu : nullptr);
  };

  Eigen::MatrixXd g = (A != nullptr) ? embed_gauge(*A).matrix()
                                     : GalileanElement::identity(n).matrix();

  DevelopmentResult out;
  out.samples.push_back({curve.s[0], GalileanElement::from_matrix(g), ModelPoint{}});
  out.samples.back().q = project_to_model(out.samples.back().g);

  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    const double s0 = curve.s[k];
    const double h = curve.s[k + 1] - s0;
    const ChartPoint& p0 = curve.points[k];
    const ChartPoint pmid = rk4_point_step(tangent, s0, p0, 0.5 * h);
    const ChartPoint& p1 = curve.points[k + 1];

    const Eigen::MatrixXd xi0 = xi_at(s0, p0);
    const Eigen::MatrixXd xim = xi_at(s0 + 0.5 * h, pmid);
    const Eigen::MatrixXd xi1 = xi_at(s0 + h, p1);

    const Eigen::MatrixXd k1 = g * xi0;
    const Eigen::MatrixXd k2 = (g + 0.5 * h * k1) * xim;
    const Eigen::MatrixXd k3 = (g + 0.5 * h * k2) * xim;
    const Eigen::MatrixXd k4 = (g + h * k3) * xi1;
    g += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    // Re-assert the group block pattern; abort on real corruption.
    double drift = std::abs(g(0, 0) - 1.0) + std::abs(g(1, 1) - 1.0);
    for (int j = 1; j < m; ++j) drift = std::max(drift, std::abs(g(0, j)));
    for (int j = 2; j < m; ++j) drift = std::max(drift, std::abs(g(1, j)));
    if (drift > 1e-8)
      throw DevelopmentError("develop: group invariant drift " + std::to_string(drift));
    g(0, 0) = 1.0;
    g(1, 1) = 1.0;
    for (int j = 1; j < m; ++j) g(0, j) = 0.0;
    for (int j = 2; j < m; ++j) g(1, j) = 0.0;

    DevelopedSample ds{curve.s[k + 1], GalileanElement::from_matrix(g), ModelPoint{}};
    ds.q = project_to_model(ds.g);
    out.samples.push_back(std::move(ds));
  }
  return out;
}

}  // namespace

DevelopmentResult develop(const GalileanConnection& conn, const CurveSamples& curve,
                          const TangentField& tangent) {
  return develop_impl(conn, curve, tangent, nullptr);
}

DevelopmentResult develop_in_gauge(const GalileanConnection& conn, const CurveSamples& curve,
                                   const TangentField& tangent, const Eigen::MatrixXd& A) {
  return develop_impl(conn, curve, tangent, &A);
}

GeodesicCheck check_curve_development(const GalileanConnection& conn, const CurveSamples& curve,
                                      const TangentField& tangent, double tol) {
  GeodesicCheck out;
  out.truncated = curve.truncated;

  for (std::size_t k = 0; k < curve.size(); ++k) {
    const TangentVector v = tangent(curve.s[k], curve.points[k]);
    for (int i = 0; i < conn.n; ++i) {
      out.max_omega_pullback = std::max(
          out.max_omega_pullback, std::abs(evaluate_one_form(conn.omega[i], curve.points[k], v)));
      out.max_phi_pullback = std::max(
          out.max_phi_pullback, std::abs(evaluate_one_form(conn.phi[i], curve.points[k], v)));
    }
  }

  const DevelopmentResult dev = develop(conn, curve, tangent);
  if (dev.samples.size() >= 3) out.line = is_straight_line(dev.projected(), tol);
  out.passed = !out.truncated && dev.samples.size() >= 3 && out.line.straight &&
               out.max_omega_pullback <= tol && out.max_phi_pullback <= tol;
  return out;
}

GeodesicCheck check_geodesic_development(const GalileanConnection& conn,
                                         const SecondOrderSystem& sys, const ChartPoint& init,
                                         double s_end, double h, double tol) {
  const CurveSamples curve = integrate_geodesic(sys, init, s_end, h);
  return check_curve_development(conn, curve, geodesic_field(sys), tol);
}

}  // namespace galcon
