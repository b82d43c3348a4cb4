#include <doctest.h>

#include <cmath>
#include <random>

#include "galcon/connection.hpp"
#include "galcon/forms.hpp"
#include "test_helpers.hpp"

using namespace galcon;
using galcon::testing::random_point;
using galcon::testing::random_tangent;

namespace {

// Random 1-form with smooth coefficients on every coordinate slot.
DifferentialForm random_one_form(std::mt19937_64& rng, int n, int depth = 3) {
  DifferentialForm a(n, 1);
  for (int mu = 0; mu <= 2 * n; ++mu)
    a.add_term({mu}, galcon::testing::random_smooth_expr(rng, n, depth));
  return a;
}

TangentVector basis_tangent(int n, int coord) {
  TangentVector v = TangentVector::zero(n);
  if (coord == 0)
    v.vt = 1.0;
  else if (coord <= n)
    v.vx(coord - 1) = 1.0;
  else
    v.vy(coord - n - 1) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("wedge: antisymmetry, sign rule, bilinearity") {
  const int n = 1;
  DifferentialForm dt = DifferentialForm::dt(n);
  DifferentialForm dx = DifferentialForm::dx(n, 1);
  DifferentialForm dy = DifferentialForm::dy(n, 1);

  CHECK(wedge(dt, dt).is_structurally_zero());

  DifferentialForm a = wedge(dx, dt);
  DifferentialForm b = wedge(dt, dx);
  CHECK((a + b).is_structurally_zero());

  DifferentialForm scaled = wedge(variable(var_x(1)) * dt, dy);
  ChartPoint p = ChartPoint::zero(1);
  p.x(0) = 3.0;
  CHECK(evaluate_two_form(scaled, p, basis_tangent(1, 0), basis_tangent(1, 2)) ==
        doctest::Approx(3.0));
}

TEST_CASE("wedge: graded antisymmetry on random forms") {
  std::mt19937_64 rng(11);
  for (int n : {1, 2}) {
    for (int rep = 0; rep < 5; ++rep) {
      DifferentialForm a = random_one_form(rng, n);
      DifferentialForm b = random_one_form(rng, n);
      // deg 1 * deg 1: a^b = -(b^a)
      DifferentialForm lhs = wedge(a, b);
      DifferentialForm rhs = wedge(b, a);
      for (int k = 0; k < 10; ++k) {
        ChartPoint p = random_point(rng, n);
        TangentVector u = random_tangent(rng, n);
        TangentVector v = random_tangent(rng, n);
        CHECK(evaluate_two_form(lhs, p, u, v) ==
              doctest::Approx(-evaluate_two_form(rhs, p, u, v)).epsilon(1e-10));
      }
    }
  }
  CHECK_THROWS_AS(
      wedge(wedge(DifferentialForm::dt(1), DifferentialForm::dx(1, 1)),
            wedge(DifferentialForm::dt(1), DifferentialForm::dy(1, 1))),
      std::invalid_argument);
}

TEST_CASE("exterior derivative: coordinate forms and Leibniz") {
  const int n = 1;
  CHECK(exterior_derivative(DifferentialForm::dt(n)).is_structurally_zero());

  // d(x1 dy1) = dx1 ^ dy1
  DifferentialForm a = variable(var_x(1)) * DifferentialForm::dy(n, 1);
  DifferentialForm da = exterior_derivative(a);
  DifferentialForm expected = wedge(DifferentialForm::dx(n, 1), DifferentialForm::dy(n, 1));
  CHECK((da - expected).simplified().is_structurally_zero());
}

TEST_CASE("exterior derivative of the contact form") {
  // d(dx1 - y1 dt) = dt ^ dy1
  const int n = 1;
  DifferentialForm contact =
      DifferentialForm::dx(n, 1) - variable(var_y(1)) * DifferentialForm::dt(n);
  DifferentialForm dc = exterior_derivative(contact);
  DifferentialForm expected = wedge(DifferentialForm::dt(n), DifferentialForm::dy(n, 1));
  CHECK((dc - expected).simplified().is_structurally_zero());

  // cross-check the value against the finite-difference oracle
  std::mt19937_64 rng(5);
  for (int k = 0; k < 5; ++k) {
    ChartPoint p = random_point(rng, n);
    TangentVector u = random_tangent(rng, n);
    TangentVector v = random_tangent(rng, n);
    const Eigen::MatrixXd w = numeric_exterior_derivative(contact, p);
    const double oracle = u.flat().transpose() * w * v.flat();
    CHECK(evaluate_two_form(dc, p, u, v) == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("d of d vanishes on random 1-forms") {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int n : {1, 2}) {
    for (int rep = 0; rep < 15; ++rep) {
      DifferentialForm a = random_one_form(rng, n);
      DifferentialForm dda = exterior_derivative(exterior_derivative(a)).simplified();
      for (int k = 0; k < 20; ++k) {
        ChartPoint p = random_point(rng, n);
        CHECK(max_abs_coefficient(dda, p) <= 1e-12);
      }
      ++checked;
    }
  }
  CHECK(checked == 30);
}

TEST_CASE("evaluate_two_form: dual pairing and antisymmetry") {
  const int n = 1;
  DifferentialForm dtdx = wedge(DifferentialForm::dt(n), DifferentialForm::dx(n, 1));
  ChartPoint p = ChartPoint::zero(n);
  TangentVector u = basis_tangent(n, 0);
  TangentVector v = basis_tangent(n, 1);
  CHECK(evaluate_two_form(dtdx, p, u, v) == doctest::Approx(1.0));
  CHECK(evaluate_two_form(dtdx, p, u, u) == doctest::Approx(0.0));

  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    TangentVector a = random_tangent(rng, n);
    TangentVector b = random_tangent(rng, n);
    CHECK(evaluate_two_form(dtdx, p, a, b) ==
          doctest::Approx(-evaluate_two_form(dtdx, p, b, a)));
  }
}

TEST_CASE("d agrees with the circulation oracle on random 1-forms") {
  std::mt19937_64 rng(29);
  for (int n : {1, 2}) {
    for (int rep = 0; rep < 8; ++rep) {
      DifferentialForm a = random_one_form(rng, n, 2);
      DifferentialForm da = exterior_derivative(a);
      for (int k = 0; k < 5; ++k) {
        ChartPoint p = random_point(rng, n);
        TangentVector u = random_tangent(rng, n);
        TangentVector v = random_tangent(rng, n);
        // constant extensions commute, so d a(u,v) = D_u(a(v)) - D_v(a(u))
        const double h = 1e-5;
        auto along = [&](const TangentVector& dir, const TangentVector& on, double eps) {
          ChartPoint q = p;
          q.t += eps * dir.vt;
          q.x += eps * dir.vx;
          q.y += eps * dir.vy;
          return evaluate_one_form(a, q, on);
        };
        const double du = (along(u, v, h) - along(u, v, -h)) / (2.0 * h);
        const double dv = (along(v, u, h) - along(v, u, -h)) / (2.0 * h);
        CHECK(std::abs(evaluate_two_form(da, p, u, v) - (du - dv)) <= 1e-5);
      }
    }
  }
}

TEST_CASE("to_adapted_basis: basis elements land in their slots") {
  SecondOrderSystem flat{1, {parse("0", 1)}};
  GalileanConnection conn = chern_connection(flat);
  const AdaptedCoframe cf = coframe(conn);
  ChartPoint p = ChartPoint::zero(1);
  p.y(0) = 0.7;

  AdaptedTwoForm basis = to_adapted_basis(wedge(cf.tau, cf.omega[0]), cf, p);
  CHECK(basis.tau_omega(0) == doctest::Approx(1.0));
  CHECK(std::abs(basis.tau_phi(0)) <= 1e-12);
  CHECK(std::abs(basis.omega_phi(0, 0)) <= 1e-12);

  // dx1 ^ dt for the flat system is -(tau ^ omega1)
  AdaptedTwoForm flat_decomp = to_adapted_basis(
      wedge(DifferentialForm::dx(1, 1), DifferentialForm::dt(1)), cf, p);
  CHECK(flat_decomp.tau_omega(0) == doctest::Approx(-1.0));
  CHECK(std::abs(flat_decomp.tau_phi(0)) <= 1e-12);
  CHECK(std::abs(flat_decomp.omega_phi(0, 0)) <= 1e-12);

  AdaptedTwoForm zero = to_adapted_basis(DifferentialForm(1, 2), cf, p);
  CHECK(zero.tau_omega.cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(zero.tau_phi.cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("to_adapted_basis: reconstruction is the identity") {
  std::mt19937_64 rng(41);
  for (int n : {1, 2}) {
    SecondOrderSystem sys{n, {}};
    for (int i = 1; i <= n; ++i)
      sys.gamma.push_back(parse(i == 1 ? "sin(x1)*y1^2 + t" : "x1*y2 - t^2", n));
    GalileanConnection conn = chern_connection(sys);
    const AdaptedCoframe cf = coframe(conn);

    for (int rep = 0; rep < 6; ++rep) {
      DifferentialForm a(n, 2);
      for (int mu = 0; mu <= 2 * n; ++mu)
        for (int nu = mu + 1; nu <= 2 * n; ++nu)
          a.add_term({mu, nu}, galcon::testing::random_smooth_expr(rng, n, 2));

      ChartPoint p = random_point(rng, n);
      AdaptedTwoForm dec = to_adapted_basis(a, cf, p);

      DifferentialForm rebuilt(n, 2);
      for (int j = 0; j < n; ++j) {
        rebuilt = rebuilt + constant(dec.tau_omega(j)) * wedge(cf.tau, cf.omega[j]);
        rebuilt = rebuilt + constant(dec.tau_phi(j)) * wedge(cf.tau, cf.phi[j]);
        for (int k = 0; k < n; ++k) {
          rebuilt = rebuilt + constant(dec.omega_phi(j, k)) * wedge(cf.omega[j], cf.phi[k]);
          if (j < k) {
            rebuilt = rebuilt + constant(dec.omega_omega(j, k)) * wedge(cf.omega[j], cf.omega[k]);
            rebuilt = rebuilt + constant(dec.phi_phi(j, k)) * wedge(cf.phi[j], cf.phi[k]);
          }
        }
      }
      for (int k = 0; k < 8; ++k) {
        TangentVector u = random_tangent(rng, n);
        TangentVector v = random_tangent(rng, n);
        const double want = evaluate_two_form(a, p, u, v);
        const double got = evaluate_two_form(rebuilt, p, u, v);
        CHECK(std::abs(want - got) <= 1e-9 * (1.0 + std::abs(want)));
      }
    }
  }
}

TEST_CASE("to_adapted_basis: singular coframe is reported") {
  SecondOrderSystem flat{1, {parse("0", 1)}};
  GalileanConnection conn = chern_connection(flat);
  AdaptedCoframe cf = coframe(conn);
  cf.phi[0] = DifferentialForm::dx(1, 1);  // now omega and phi rows are dependent at y = 0
  ChartPoint p = ChartPoint::zero(1);
  DifferentialForm a = wedge(DifferentialForm::dt(1), DifferentialForm::dx(1, 1));
  CHECK_THROWS_AS(to_adapted_basis(a, cf, p), SingularMatrixError);
}
