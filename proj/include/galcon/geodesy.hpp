#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "galcon/connection.hpp"
#include "galcon/model.hpp"

namespace galcon {

/// Uniformly spaced samples of a curve s -> (t, x, y) on the chart.
struct CurveSamples {
  double step = 0.0;
  std::vector<double> s;
  std::vector<ChartPoint> points;
  bool truncated = false;
  std::string truncation_reason;

  std::size_t size() const { return s.size(); }
};

/// Tangent of the curve as a function of (s, current point). Developments
/// evaluate the connection forms on this field; sample positions are never
/// finite-differenced.
using TangentField = std::function<TangentVector(double, const ChartPoint&)>;

/// The geodesic right-hand side (1, y, -Gamma(t,x,y)) as a tangent field.
TangentField geodesic_field(const SecondOrderSystem& sys);

/// Classical RK4 on t' = 1, x' = y, y' = -Gamma. The parameter is the t
/// coordinate: sample k sits at init.t + k h exactly. Expression domain
/// errors and nonfinite states truncate the result and set the flag.
CurveSamples integrate_geodesic(const SecondOrderSystem& sys, const ChartPoint& init,
                                double s_end, double h);

/// Sample an analytic curve at uniform steps.
CurveSamples sample_curve(const std::function<ChartPoint(double)>& path, double s0, double s_end,
                          double h);

struct DevelopedSample {
  double s = 0.0;
  GalileanElement g;
  ModelPoint q;
};

struct DevelopmentResult {
  std::vector<DevelopedSample> samples;

  std::vector<std::pair<double, ModelPoint>> projected() const;
};

class DevelopmentError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Solve g'(s) = g(s) xi(s) from the identity, where xi is the connection
/// form evaluated on the curve tangent (through the gauge section A = I).
/// RK4 stages evaluate the tangent field at the stored samples and at a
/// midpoint advanced under the same field. Group block invariants are
/// re-asserted after every step; drift beyond 1e-8 aborts.
DevelopmentResult develop(const GalileanConnection& conn, const CurveSamples& curve,
                          const TangentField& tangent);

/// Development of the lift through the constant section with GL block A.
/// The initial group element is the embedded gauge, so the projection to
/// the model space matches the A = I development.
DevelopmentResult develop_in_gauge(const GalileanConnection& conn, const CurveSamples& curve,
                                   const TangentField& tangent, const Eigen::MatrixXd& A);

struct GeodesicCheck {
  bool passed = false;
  bool truncated = false;
  StraightLineVerdict line;
  double max_omega_pullback = 0.0;
  double max_phi_pullback = 0.0;
};

/// Develop the given curve and test the straight-line conditions together
/// with the pullback conditions |omega(sdot)|, |phi(sdot)| <= tol.
GeodesicCheck check_curve_development(const GalileanConnection& conn, const CurveSamples& curve,
                                      const TangentField& tangent, double tol);

/// integrate_geodesic -> develop -> is_straight_line, plus the pullback
/// conditions along the samples.
GeodesicCheck check_geodesic_development(const GalileanConnection& conn,
                                         const SecondOrderSystem& sys, const ChartPoint& init,
                                         double s_end, double h, double tol);

}  // namespace galcon
