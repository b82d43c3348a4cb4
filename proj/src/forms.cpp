#include "galcon/forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace galcon {

double TangentVector::component(int index) const {
  if (index == 0) return vt;
  if (index <= dim()) return vx(index - 1);
  return vy(index - dim() - 1);
}

Eigen::VectorXd TangentVector::flat() const {
  Eigen::VectorXd v(2 * dim() + 1);
  v(0) = vt;
  v.segment(1, dim()) = vx;
  v.segment(1 + dim(), dim()) = vy;
  return v;
}

TangentVector TangentVector::zero(int n) {
  return {0.0, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
}

TangentVector TangentVector::from_flat(const Eigen::VectorXd& v) {
  const int n = (static_cast<int>(v.size()) - 1) / 2;
  return {v(0), v.segment(1, n), v.segment(1 + n, n)};
}

namespace {

// Sorts key in place; returns the permutation sign, or 0 on a repeated index.
int canonicalize(std::vector<int>& key) {
  int sign = 1;
  for (std::size_t i = 1; i < key.size(); ++i) {
    for (std::size_t j = i; j > 0 && key[j] < key[j - 1]; --j) {
      std::swap(key[j], key[j - 1]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < key.size(); ++i)
    if (key[i] == key[i - 1]) return 0;
  return sign;
}

}  // namespace

DifferentialForm::DifferentialForm(int n, int degree) : n_(n), degree_(degree) {
  if (degree < 0 || degree > 3) throw std::invalid_argument("form degree must be 0..3");
}

DifferentialForm DifferentialForm::dt(int n) { return coordinate(n, 0); }
DifferentialForm DifferentialForm::dx(int n, int i) { return coordinate(n, i); }
DifferentialForm DifferentialForm::dy(int n, int i) { return coordinate(n, n + i); }

DifferentialForm DifferentialForm::coordinate(int n, int index) {
  DifferentialForm a(n, 1);
  a.add_term({index}, constant(1.0));
  return a;
}

DifferentialForm DifferentialForm::scalar(int n, Expr f) {
  DifferentialForm a(n, 0);
  a.add_term({}, std::move(f));
  return a;
}

Expr DifferentialForm::coefficient(std::vector<int> key) const {
  int sign = canonicalize(key);
  if (sign == 0) return constant(0.0);
  auto it = terms_.find(key);
  if (it == terms_.end()) return constant(0.0);
  return sign == 1 ? it->second : simplify(-it->second);
}

void DifferentialForm::add_term(std::vector<int> key, Expr c) {
  if (static_cast<int>(key.size()) != degree_)
    throw std::invalid_argument("term arity does not match form degree");
  for (int idx : key)
    if (idx < 0 || idx >= coords()) throw std::invalid_argument("coframe index out of range");
  int sign = canonicalize(key);
  if (sign == 0 || is_zero(c)) return;
  if (sign < 0) c = simplify(-c);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), std::move(c));
  } else {
    it->second = simplify(it->second + c);
    if (is_zero(it->second)) terms_.erase(it);
  }
}

DifferentialForm DifferentialForm::simplified() const {
  DifferentialForm out(n_, degree_);
  for (const auto& [key, c] : terms_) {
    Expr s = simplify(c);
    if (!is_zero(s)) out.terms_.emplace(key, std::move(s));
  }
  return out;
}

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.dimension() != b.dimension() || a.degree() != b.degree())
    throw std::invalid_argument("form sum: mismatched dimension or degree");
  DifferentialForm out = a;
  for (const auto& [key, c] : b.terms()) out.add_term(key, c);
  return out;
}

DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.dimension() != b.dimension() || a.degree() != b.degree())
    throw std::invalid_argument("form difference: mismatched dimension or degree");
  DifferentialForm out = a;
  for (const auto& [key, c] : b.terms()) out.add_term(key, simplify(-c));
  return out;
}

DifferentialForm operator*(const Expr& f, const DifferentialForm& a) {
  DifferentialForm out(a.dimension(), a.degree());
  for (const auto& [key, c] : a.terms()) out.add_term(key, simplify(f * c));
  return out;
}

DifferentialForm operator*(double c, const DifferentialForm& a) { return constant(c) * a; }

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("wedge: mismatched dimension");
  const int deg = a.degree() + b.degree();
  if (deg > 3) throw std::invalid_argument("wedge: degree overflow (cap is 3)");
  DifferentialForm out(a.dimension(), deg);
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      std::vector<int> key = ka;
      key.insert(key.end(), kb.begin(), kb.end());
      out.add_term(std::move(key), simplify(ca * cb));
    }
  }
  return out;
}

DifferentialForm exterior_derivative(const DifferentialForm& a) {
  if (a.degree() > 2) throw std::invalid_argument("exterior_derivative: degree cap exceeded");
  DifferentialForm out(a.dimension(), a.degree() + 1);
  const int n = a.dimension();
  for (const auto& [key, c] : a.terms()) {
    for (int mu = 0; mu < a.coords(); ++mu) {
      Expr dc = differentiate(c, coordinate_variable(mu, n));
      if (is_zero(dc)) continue;
      std::vector<int> dkey;
      dkey.reserve(key.size() + 1);
      dkey.push_back(mu);
      dkey.insert(dkey.end(), key.begin(), key.end());
      out.add_term(std::move(dkey), std::move(dc));
    }
  }
  return out;
}

double evaluate_zero_form(const DifferentialForm& a, const ChartPoint& p) {
  if (a.degree() != 0) throw std::invalid_argument("expected a 0-form");
  return evaluate(a.coefficient({}), p);
}

double evaluate_one_form(const DifferentialForm& a, const ChartPoint& p, const TangentVector& u) {
  if (a.degree() != 1) throw std::invalid_argument("expected a 1-form");
  double acc = 0.0;
  for (const auto& [key, c] : a.terms()) acc += evaluate(c, p) * u.component(key[0]);
  return acc;
}

double evaluate_two_form(const DifferentialForm& a, const ChartPoint& p, const TangentVector& u,
                         const TangentVector& v) {
  if (a.degree() != 2) throw std::invalid_argument("expected a 2-form");
  double acc = 0.0;
  for (const auto& [key, c] : a.terms()) {
    const int mu = key[0], nu = key[1];
    acc += evaluate(c, p) * (u.component(mu) * v.component(nu) - u.component(nu) * v.component(mu));
  }
  return acc;
}

Eigen::VectorXd one_form_components(const DifferentialForm& a, const ChartPoint& p) {
  if (a.degree() != 1) throw std::invalid_argument("expected a 1-form");
  Eigen::VectorXd comps = Eigen::VectorXd::Zero(a.coords());
  for (const auto& [key, c] : a.terms()) comps(key[0]) = evaluate(c, p);
  return comps;
}

Eigen::MatrixXd two_form_matrix(const DifferentialForm& a, const ChartPoint& p) {
  if (a.degree() != 2) throw std::invalid_argument("expected a 2-form");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(a.coords(), a.coords());
  for (const auto& [key, c] : a.terms()) {
    const double v = evaluate(c, p);
    w(key[0], key[1]) = v;
    w(key[1], key[0]) = -v;
  }
  return w;
}

double max_abs_coefficient(const DifferentialForm& a, const ChartPoint& p) {
  double m = 0.0;
  for (const auto& [key, c] : a.terms()) m = std::max(m, std::abs(evaluate(c, p)));
  return m;
}

AdaptedTwoForm to_adapted_basis(const DifferentialForm& a, const AdaptedCoframe& cf,
                                const ChartPoint& p, const Eigen::MatrixXd* gauge) {
  if (a.degree() != 2) throw std::invalid_argument("to_adapted_basis: expected a 2-form");
  const int n = cf.dimension();
  const int m = 2 * n + 1;

  Eigen::MatrixXd coframe(m, m);
  coframe.row(0) = one_form_components(cf.tau, p);
  for (int i = 0; i < n; ++i) {
    coframe.row(1 + i) = one_form_components(cf.omega[i], p);
    coframe.row(1 + n + i) = one_form_components(cf.phi[i], p);
  }
  if (gauge != nullptr) {
    Eigen::PartialPivLU<Eigen::MatrixXd> glu(*gauge);
    coframe.block(1, 0, n, m) = glu.solve(coframe.block(1, 0, n, m));
    coframe.block(1 + n, 0, n, m) = glu.solve(coframe.block(1 + n, 0, n, m));
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(coframe);
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pmax = pivots.maxCoeff();
  if (pmax == 0.0 || pivots.minCoeff() / pmax < 1e-12)
    throw SingularMatrixError("adapted coframe is singular at the requested point");

  // Columns of the inverse are the frame vectors dual to (tau, omega, phi).
  const Eigen::MatrixXd dual = lu.solve(Eigen::MatrixXd::Identity(m, m));
  const Eigen::MatrixXd w = two_form_matrix(a, p);
  Eigen::MatrixXd s = dual.transpose() * w * dual;
  s = 0.5 * (s - s.transpose()).eval();

  AdaptedTwoForm out;
  out.tau_omega = s.block(0, 1, 1, n).transpose();
  out.tau_phi = s.block(0, 1 + n, 1, n).transpose();
  out.omega_omega = s.block(1, 1, n, n);
  out.omega_phi = s.block(1, 1 + n, n, n);
  out.phi_phi = s.block(1 + n, 1 + n, n, n);
  return out;
}

}  // namespace galcon
