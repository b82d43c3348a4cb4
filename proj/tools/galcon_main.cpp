// galcon: build Galilean Cartan connections from second-order ODE systems,
// check their structure equations, and emit curvature invariants, geodesics,
// and developments in machine-readable form.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "galcon/connection.hpp"
#include "galcon/geodesy.hpp"
#include "galcon/jetconn.hpp"
#include "galcon/system_io.hpp"

using namespace galcon;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitBlowUp = 3;

struct CheckOptions {
  std::string file;
  int points = 100;
  std::uint64_t seed = 12345;
  double tol = 1e-6;
  bool appendix = false;
  std::string format = "text";
};

struct InvariantsOptions {
  std::string file;
  std::vector<std::string> at;
  std::string grid;
  std::string format = "csv";
};

struct GeodesicOptions {
  std::string file;
  std::string init;
  double s_end = 1.0;
  double step = 1e-3;
  bool with_development = false;
  std::string format = "csv";
};

int run_check(const CheckOptions& opt) {
  SystemFile file = load_system_file(opt.file);
  GalileanConnection conn = build_connection(file.system, file.normalization);
  std::vector<ChartPoint> pts =
      sample_points(file.n, opt.points, opt.seed, system_expressions(file));
  StructureReport report = verify_structure_equations(conn, pts, opt.tol);

  double appendix_vertical = 0.0;
  double appendix_agreement = 0.0;
  if (opt.appendix) {
    NonlinearConnection jet = chern_nonlinear(file.system);
    GalileanConnection chern = chern_connection(file.system);
    for (int k = 1; k <= file.n; ++k) {
      AdaptedVectorField tor = torsion(frame_dy(k, file.n), frame_dt(), jet);
      for (const ChartPoint& p : pts) {
        const Eigen::VectorXd c = evaluate_components(tor, p);
        appendix_vertical =
            std::max(appendix_vertical, c.tail(file.n).cwiseAbs().maxCoeff());
      }
    }
    for (int i = 0; i < file.n; ++i)
      for (int j = 0; j < file.n; ++j)
        for (const ChartPoint& p : pts)
          appendix_agreement =
              std::max(appendix_agreement, std::abs(evaluate(jet.Nfield[i][j], p) -
                                                    evaluate(chern.N[i][j], p)));
  }

  double worst = report.max_residual();
  if (opt.appendix) worst = std::max({worst, appendix_vertical, appendix_agreement});
  const bool ok = worst <= opt.tol;

  if (opt.format == "json") {
    json out;
    out["system"] = file.name.empty() ? opt.file : file.name;
    out["n"] = file.n;
    out["points"] = report.points_evaluated;
    out["seed"] = opt.seed;
    out["tol"] = opt.tol;
    out["residuals"]["d_tau"] = report.max_dtau;
    out["residuals"]["omega_structure"] = report.max_omega_eq;
    out["residuals"]["phi_vs_fd_oracle"] = report.max_phi_oracle;
    out["residuals"]["phi_phi_slots"] = report.max_phi_phi;
    if (opt.appendix) {
      out["residuals"]["appendix_torsion_vertical"] = appendix_vertical;
      out["residuals"]["appendix_n_agreement"] = appendix_agreement;
    }
    out["point_errors"] = report.point_errors;
    out["pass"] = ok;
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("system: %s (n=%d)\n", file.name.empty() ? opt.file.c_str() : file.name.c_str(),
                file.n);
    std::printf("points: %d  seed: %llu  tol: %s\n", report.points_evaluated,
                static_cast<unsigned long long>(opt.seed), format_double(opt.tol).c_str());
    std::printf("%-28s %s\n", "d_tau", format_double(report.max_dtau).c_str());
    std::printf("%-28s %s\n", "omega_structure", format_double(report.max_omega_eq).c_str());
    std::printf("%-28s %s\n", "phi_vs_fd_oracle", format_double(report.max_phi_oracle).c_str());
    std::printf("%-28s %s\n", "phi_phi_slots", format_double(report.max_phi_phi).c_str());
    if (opt.appendix) {
      std::printf("%-28s %s\n", "appendix_torsion_vertical",
                  format_double(appendix_vertical).c_str());
      std::printf("%-28s %s\n", "appendix_n_agreement",
                  format_double(appendix_agreement).c_str());
    }
    for (const std::string& err : report.point_errors)
      std::printf("point error: %s\n", err.c_str());
    std::printf("RESULT: %s\n", ok ? "PASS" : "FAIL");
  }
  return ok ? kExitPass : kExitCheckFailed;
}

void append_invariant_header(std::string& header, int n) {
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      header += ",D[" + std::to_string(i) + "][" + std::to_string(j) + "]";
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k)
        header += ",Q[" + std::to_string(i) + "][" + std::to_string(j) + "][" +
                  std::to_string(k) + "]";
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      header += ",P[" + std::to_string(i) + "][" + std::to_string(j) + "]";
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k)
        header += ",T[" + std::to_string(i) + "][" + std::to_string(j) + "][" +
                  std::to_string(k) + "]";
}

int run_invariants(const InvariantsOptions& opt) {
  SystemFile file = load_system_file(opt.file);
  const int n = file.n;

  std::vector<ChartPoint> pts;
  for (const std::string& spec : opt.at) pts.push_back(parse_point_spec(spec, n));
  if (!opt.grid.empty())
    for (ChartPoint& p : parse_grid_spec(opt.grid, n)) pts.push_back(std::move(p));
  if (pts.empty()) throw SystemFileError("invariants: supply --at and/or --grid");

  GalileanConnection conn = build_connection(file.system, file.normalization);
  const CurvatureForms curv = curvature(conn);

  int warnings = 0;
  json rows = json::array();
  std::string header = "t";
  for (int i = 1; i <= n; ++i) header += ",x" + std::to_string(i);
  for (int i = 1; i <= n; ++i) header += ",y" + std::to_string(i);
  append_invariant_header(header, n);
  header += ",status";
  if (opt.format == "csv") std::printf("%s\n", header.c_str());

  for (const ChartPoint& p : pts) {
    std::string status = "ok";
    CurvatureInvariants inv;
    try {
      inv = extract_invariants(conn, curv, p);
    } catch (const EvalDomainError& err) {
      status = std::string("error: ") + err.what();
      ++warnings;
    } catch (const SingularMatrixError& err) {
      status = std::string("error: ") + err.what();
      ++warnings;
    }

    if (opt.format == "json") {
      json row;
      row["t"] = p.t;
      row["x"] = std::vector<double>(p.x.data(), p.x.data() + n);
      row["y"] = std::vector<double>(p.y.data(), p.y.data() + n);
      row["status"] = status;
      if (status == "ok") {
        json D = json::array(), Q = json::array(), P = json::array(), T = json::array();
        for (int i = 0; i < n; ++i) {
          D.push_back(std::vector<double>(inv.D.row(i).begin(), inv.D.row(i).end()));
          P.push_back(std::vector<double>(inv.P.row(i).begin(), inv.P.row(i).end()));
          json qi = json::array(), ti = json::array();
          for (int j = 0; j < n; ++j) {
            qi.push_back(std::vector<double>(inv.Q[i].row(j).begin(), inv.Q[i].row(j).end()));
            ti.push_back(
                std::vector<double>(inv.Ttors[i].row(j).begin(), inv.Ttors[i].row(j).end()));
          }
          Q.push_back(qi);
          T.push_back(ti);
        }
        row["D"] = D;
        row["Q"] = Q;
        row["P"] = P;
        row["T"] = T;
      }
      rows.push_back(row);
      continue;
    }

    std::string line = format_double(p.t);
    for (int i = 0; i < n; ++i) line += "," + format_double(p.x(i));
    for (int i = 0; i < n; ++i) line += "," + format_double(p.y(i));
    auto emit_matrix = [&](const Eigen::MatrixXd& m) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) line += "," + format_double(status == "ok" ? m(i, j) : std::nan(""));
    };
    auto emit_cube = [&](const std::vector<Eigen::MatrixXd>& c) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            line += "," + format_double(status == "ok" ? c[i](j, k) : std::nan(""));
    };
    if (status != "ok") {
      // flagged row: tensors emitted as nan
      Eigen::MatrixXd dummy = Eigen::MatrixXd::Zero(n, n);
      inv.D = dummy;
      inv.P = dummy;
      inv.Q.assign(n, dummy);
      inv.Ttors.assign(n, dummy);
    }
    emit_matrix(inv.D);
    emit_cube(inv.Q);
    emit_matrix(inv.P);
    emit_cube(inv.Ttors);
    line += "," + status;
    std::printf("%s\n", line.c_str());
  }

  if (opt.format == "json") std::cout << rows.dump(2) << "\n";
  if (warnings > 0) std::fprintf(stderr, "warnings: %d flagged point(s)\n", warnings);
  return kExitPass;
}

int run_geodesic(const GeodesicOptions& opt) {
  SystemFile file = load_system_file(opt.file);
  const int n = file.n;
  if (opt.init.empty()) throw SystemFileError("geodesic: supply --init");
  const ChartPoint init = parse_point_spec(opt.init, n);

  CurveSamples curve = integrate_geodesic(file.system, init, opt.s_end, opt.step);

  DevelopmentResult dev;
  double residual = 0.0;
  if (opt.with_development && curve.size() >= 2) {
    GalileanConnection conn = build_connection(file.system, file.normalization);
    dev = develop(conn, curve, geodesic_field(file.system));
    if (dev.samples.size() >= 3)
      residual = is_straight_line(dev.projected(), 1e-5).max_violation();
  }

  if (opt.format == "json") {
    json out;
    out["system"] = file.name.empty() ? opt.file : file.name;
    out["truncated"] = curve.truncated;
    if (curve.truncated) out["truncation_reason"] = curve.truncation_reason;
    json rows = json::array();
    for (std::size_t k = 0; k < curve.size(); ++k) {
      json row;
      row["s"] = curve.s[k];
      row["t"] = curve.points[k].t;
      row["x"] = std::vector<double>(curve.points[k].x.data(), curve.points[k].x.data() + n);
      row["y"] = std::vector<double>(curve.points[k].y.data(), curve.points[k].y.data() + n);
      if (opt.with_development && k < dev.samples.size()) {
        row["dev_t"] = dev.samples[k].q.t;
        row["dev_x"] =
            std::vector<double>(dev.samples[k].q.x.data(), dev.samples[k].q.x.data() + n);
        row["dev_y"] =
            std::vector<double>(dev.samples[k].q.y.data(), dev.samples[k].q.y.data() + n);
      }
      rows.push_back(row);
    }
    out["samples"] = rows;
    if (opt.with_development) out["straight_line_residual"] = residual;
    std::cout << out.dump(2) << "\n";
  } else {
    std::string header = "s,t";
    for (int i = 1; i <= n; ++i) header += ",x" + std::to_string(i);
    for (int i = 1; i <= n; ++i) header += ",y" + std::to_string(i);
    if (opt.with_development) {
      header += ",dev_t";
      for (int i = 1; i <= n; ++i) header += ",dev_x" + std::to_string(i);
      for (int i = 1; i <= n; ++i) header += ",dev_y" + std::to_string(i);
    }
    header += ",status";
    std::printf("%s\n", header.c_str());
    for (std::size_t k = 0; k < curve.size(); ++k) {
      std::string line = format_double(curve.s[k]) + "," + format_double(curve.points[k].t);
      for (int i = 0; i < n; ++i) line += "," + format_double(curve.points[k].x(i));
      for (int i = 0; i < n; ++i) line += "," + format_double(curve.points[k].y(i));
      if (opt.with_development) {
        if (k < dev.samples.size()) {
          const ModelPoint& q = dev.samples[k].q;
          line += "," + format_double(q.t);
          for (int i = 0; i < n; ++i) line += "," + format_double(q.x(i));
          for (int i = 0; i < n; ++i) line += "," + format_double(q.y(i));
        } else {
          for (int i = 0; i < 2 * n + 1; ++i) line += ",";
        }
      }
      const bool last = (k + 1 == curve.size());
      line += std::string(",") + (curve.truncated && last ? "truncated" : "ok");
      std::printf("%s\n", line.c_str());
    }
    if (opt.with_development)
      std::printf("# straight_line_residual = %s\n", format_double(residual).c_str());
    if (curve.truncated)
      std::printf("# truncated: %s\n", curve.truncation_reason.c_str());
  }
  return curve.truncated ? kExitBlowUp : kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Galilean Cartan connections for second-order ODE systems"};
  app.require_subcommand(1);

  CheckOptions check_opt;
  CLI::App* check = app.add_subcommand(
      "check", "verify the structure equations of a system file at random points");
  check->add_option("file", check_opt.file, "system JSON file")->required();
  check->add_option("--points", check_opt.points, "number of sample points")
      ->check(CLI::PositiveNumber);
  check->add_option("--seed", check_opt.seed, "RNG seed for the sample points");
  check->add_option("--tol", check_opt.tol, "residual tolerance")->check(CLI::PositiveNumber);
  check->add_flag("--appendix", check_opt.appendix, "also run the jet-bundle torsion cross-check");
  check->add_option("--format", check_opt.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  InvariantsOptions inv_opt;
  CLI::App* invariants =
      app.add_subcommand("invariants", "emit the curvature tensors D, Q, P, T at points");
  invariants->add_option("file", inv_opt.file, "system JSON file")->required();
  invariants->add_option("--at", inv_opt.at, "point spec t=..,x=[..],y=[..] (repeatable)");
  invariants->add_option("--grid", inv_opt.grid, "grid spec t=lo:hi:count,x1=...,y1=...");
  invariants->add_option("--format", inv_opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  GeodesicOptions geo_opt;
  CLI::App* geodesic = app.add_subcommand("geodesic", "integrate a geodesic, optionally develop");
  geodesic->add_option("file", geo_opt.file, "system JSON file")->required();
  geodesic->add_option("--init", geo_opt.init, "initial point t=..,x=[..],y=[..]")->required();
  geodesic->add_option("--end", geo_opt.s_end, "final parameter value");
  geodesic->add_option("--step", geo_opt.step, "integration step")->check(CLI::PositiveNumber);
  geodesic->add_flag("--develop", geo_opt.with_development,
                     "append the developed model-space curve");
  geodesic->add_option("--format", geo_opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return run_check(check_opt);
    if (*invariants) return run_invariants(inv_opt);
    if (*geodesic) return run_geodesic(geo_opt);
  } catch (const SystemFileError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitInputError;
  } catch (const ParseError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitInputError;
  } catch (const std::invalid_argument& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitInputError;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitCheckFailed;
  }
  return kExitInputError;
}
