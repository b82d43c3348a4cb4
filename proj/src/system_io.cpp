#include "galcon/system_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace galcon {

namespace {

using nlohmann::json;

Expr parse_field(const std::string& text, int n, const std::string& where) {
  try {
    return parse(text, n);
  } catch (const ParseError& err) {
    throw SystemFileError(where + ": " + err.what());
  }
}

}  // namespace

SystemFile parse_system_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw SystemFileError(std::string("invalid JSON: ") + err.what());
  }
  if (!doc.is_object()) throw SystemFileError("top-level JSON value must be an object");

  SystemFile out;
  out.name = doc.value("name", std::string{});
  out.description = doc.value("description", std::string{});

  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw SystemFileError("missing integer field 'n'");
  out.n = doc["n"].get<int>();
  if (out.n < 1 || out.n > 8) throw SystemFileError("n must lie in [1, 8]");
  const int n = out.n;

  if (!doc.contains("gamma") || !doc["gamma"].is_array() ||
      static_cast<int>(doc["gamma"].size()) != n)
    throw SystemFileError("'gamma' must be an array of n expression strings");
  out.system.n = n;
  for (int i = 0; i < n; ++i) {
    if (!doc["gamma"][i].is_string()) throw SystemFileError("'gamma' entries must be strings");
    out.system.gamma.push_back(
        parse_field(doc["gamma"][i].get<std::string>(), n, "gamma[" + std::to_string(i + 1) + "]"));
  }

  out.normalization = NormalizationChoice::zero(n);
  if (doc.contains("D")) {
    const json& D = doc["D"];
    if (!D.is_array() || static_cast<int>(D.size()) != n)
      throw SystemFileError("'D' must be an n x n array of expression strings");
    for (int i = 0; i < n; ++i) {
      if (!D[i].is_array() || static_cast<int>(D[i].size()) != n)
        throw SystemFileError("'D' must be an n x n array of expression strings");
      for (int j = 0; j < n; ++j) {
        if (!D[i][j].is_string()) throw SystemFileError("'D' entries must be strings");
        out.normalization.D[i][j] =
            parse_field(D[i][j].get<std::string>(), n,
                        "D[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]");
      }
    }
  }
  if (doc.contains("Qsym")) {
    const json& Q = doc["Qsym"];
    if (!Q.is_array() || static_cast<int>(Q.size()) != n)
      throw SystemFileError("'Qsym' must be an n x n x n array of expression strings");
    for (int i = 0; i < n; ++i) {
      if (!Q[i].is_array() || static_cast<int>(Q[i].size()) != n)
        throw SystemFileError("'Qsym' must be an n x n x n array of expression strings");
      for (int j = 0; j < n; ++j) {
        if (!Q[i][j].is_array() || static_cast<int>(Q[i][j].size()) != n)
          throw SystemFileError("'Qsym' must be an n x n x n array of expression strings");
        for (int k = 0; k < n; ++k) {
          if (!Q[i][j][k].is_string()) throw SystemFileError("'Qsym' entries must be strings");
          out.normalization.Qsym[i][j][k] = parse_field(
              Q[i][j][k].get<std::string>(), n,
              "Qsym[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "][" +
                  std::to_string(k + 1) + "]");
        }
      }
    }
  }
  try {
    out.system.validate();
    out.normalization.validate(n);
  } catch (const std::invalid_argument& err) {
    throw SystemFileError(err.what());
  }
  return out;
}

SystemFile load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SystemFileError("cannot open system file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system_json(buf.str());
}

namespace {

void strip_spaces(std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  s = std::move(out);
}

double parse_number(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw SystemFileError(where + ": bad number '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& text, const std::string& where) {
  std::string body = text;
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw SystemFileError(where + ": unbalanced brackets");
    body = body.substr(1, body.size() - 2);
  }
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t comma = body.find(',', start);
    std::string item = body.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!item.empty()) out.push_back(parse_number(item, where));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Split on commas that are not nested inside brackets.
std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

}  // namespace

ChartPoint parse_point_spec(const std::string& spec, int n) {
  std::string s = spec;
  strip_spaces(s);
  ChartPoint p = ChartPoint::zero(n);
  for (const std::string& part : split_top_level(s)) {
    std::size_t eq = part.find('=');
    if (eq == std::string::npos) throw SystemFileError("point spec: expected key=value in '" + part + "'");
    const std::string key = part.substr(0, eq);
    const std::string value = part.substr(eq + 1);
    if (key == "t") {
      p.t = parse_number(value, "point spec t");
    } else if (key == "x" || key == "y") {
      std::vector<double> vals = parse_list(value, "point spec " + key);
      if (static_cast<int>(vals.size()) != n)
        throw SystemFileError("point spec: '" + key + "' needs " + std::to_string(n) +
                              " entries");
      Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vals.data(), n);
      (key == "x" ? p.x : p.y) = v;
    } else {
      throw SystemFileError("point spec: unknown key '" + key + "'");
    }
  }
  return p;
}

std::vector<ChartPoint> parse_grid_spec(const std::string& spec, int n) {
  std::string s = spec;
  strip_spaces(s);

  struct Axis {
    int coord;  // coordinate index 0..2n
    std::vector<double> values;
  };
  std::vector<Axis> axes;

  for (const std::string& part : split_top_level(s)) {
    if (part.empty()) continue;
    std::size_t eq = part.find('=');
    if (eq == std::string::npos) throw SystemFileError("grid spec: expected key=lo:hi:count");
    const std::string key = part.substr(0, eq);
    const std::string value = part.substr(eq + 1);

    int coord = -1;
    if (key == "t") {
      coord = 0;
    } else if (key.size() > 1 && (key[0] == 'x' || key[0] == 'y')) {
      int idx = 0;
      auto [ptr, ec] = std::from_chars(key.data() + 1, key.data() + key.size(), idx);
      if (ec != std::errc{} || ptr != key.data() + key.size() || idx < 1 || idx > n)
        throw SystemFileError("grid spec: bad coordinate '" + key + "'");
      coord = (key[0] == 'x') ? idx : n + idx;
    } else {
      throw SystemFileError("grid spec: bad coordinate '" + key + "'");
    }

    std::vector<std::string> pieces;
    std::size_t start = 0;
    while (true) {
      std::size_t colon = value.find(':', start);
      pieces.push_back(value.substr(start, colon == std::string::npos ? colon : colon - start));
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
    Axis axis;
    axis.coord = coord;
    if (pieces.size() == 1) {
      axis.values.push_back(parse_number(pieces[0], "grid spec " + key));
    } else if (pieces.size() == 3) {
      const double lo = parse_number(pieces[0], "grid spec " + key);
      const double hi = parse_number(pieces[1], "grid spec " + key);
      const long count = std::lround(parse_number(pieces[2], "grid spec " + key));
      if (count < 1) throw SystemFileError("grid spec: count must be >= 1 for '" + key + "'");
      for (long k = 0; k < count; ++k)
        axis.values.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) /
                                                        static_cast<double>(count - 1));
    } else {
      throw SystemFileError("grid spec: '" + key + "' must be value or lo:hi:count");
    }
    axes.push_back(std::move(axis));
  }

  std::size_t total = 1;
  for (const Axis& a : axes) {
    total *= a.values.size();
    if (total > 100000) throw SystemFileError("grid spec: too many points (cap 100000)");
  }

  std::vector<ChartPoint> out;
  out.reserve(total);
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    ChartPoint p = ChartPoint::zero(n);
    std::size_t rest = k;
    for (std::size_t a = axes.size(); a-- > 0;) {
      idx[a] = rest % axes[a].values.size();
      rest /= axes[a].values.size();
    }
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const double v = axes[a].values[idx[a]];
      const int c = axes[a].coord;
      if (c == 0)
        p.t = v;
      else if (c <= n)
        p.x(c - 1) = v;
      else
        p.y(c - n - 1) = v;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<ChartPoint> sample_points(int n, int count, std::uint64_t seed,
                                      const std::vector<Expr>& guards, double radius,
                                      int max_rejections) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-radius, radius);
  std::vector<ChartPoint> out;
  out.reserve(count);
  int rejections = 0;
  while (static_cast<int>(out.size()) < count) {
    ChartPoint p = ChartPoint::zero(n);
    p.t = dist(rng);
    for (int i = 0; i < n; ++i) {
      p.x(i) = dist(rng);
      p.y(i) = dist(rng);
    }
    bool ok = true;
    for (const Expr& g : guards) {
      try {
        (void)evaluate(g, p);
      } catch (const EvalDomainError&) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.push_back(std::move(p));
    } else if (++rejections > max_rejections) {
      throw std::runtime_error("sample_points: rejection budget exhausted");
    }
  }
  return out;
}

std::vector<Expr> system_expressions(const SystemFile& file) {
  std::vector<Expr> out = file.system.gamma;
  for (const auto& row : file.normalization.D)
    for (const Expr& e : row) out.push_back(e);
  for (const auto& mat : file.normalization.Qsym)
    for (const auto& row : mat)
      for (const Expr& e : row) out.push_back(e);
  return out;
}

}  // namespace galcon
