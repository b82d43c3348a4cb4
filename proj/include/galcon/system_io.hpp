#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "galcon/connection.hpp"

namespace galcon {

class SystemFileError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// On-disk description of a system: n, the Gamma strings, optional D and
/// Qsym string tensors (defaulting to "0"), and free-form metadata.
struct SystemFile {
  std::string name;
  std::string description;
  int n = 0;
  SecondOrderSystem system;
  NormalizationChoice normalization;
};

SystemFile load_system_file(const std::string& path);
SystemFile parse_system_json(const std::string& text);

/// Parse "t=..,x=[..],y=[..]" into a chart point (n entries in each list;
/// a scalar is accepted for n = 1).
ChartPoint parse_point_spec(const std::string& spec, int n);

/// Parse a grid spec "t=lo:hi:count,x1=lo:hi:count,..."; unlisted
/// coordinates stay 0. Points are emitted in row-major order, t slowest.
std::vector<ChartPoint> parse_grid_spec(const std::string& spec, int n);

/// 17 significant digits; reloads to the same double.
std::string format_double(double v);

/// Points drawn uniformly from the box |t|,|x|,|y| <= radius, rejecting
/// points where any guard expression fails to evaluate (at most
/// max_rejections rejections before giving up).
std::vector<ChartPoint> sample_points(int n, int count, std::uint64_t seed,
                                      const std::vector<Expr>& guards, double radius = 1.0,
                                      int max_rejections = 1000);

/// All expressions of a system file (Gamma, D, Qsym) -- the rejection guards.
std::vector<Expr> system_expressions(const SystemFile& file);

}  // namespace galcon
