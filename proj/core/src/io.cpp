#include "stcov/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "stcov/error.hpp"

namespace stcov::io {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

const json& require_object(const json& j, const std::string& what) {
  if (!j.is_object()) fail(what + ": expected a JSON object");
  return j;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) fail(what + ": unknown key \"" + it.key() + "\"");
  }
}

double number(const json& j, const std::string& key, const std::string& what, std::optional<double> dflt = {}) {
  if (!j.contains(key)) {
    if (dflt) return *dflt;
    fail(what + ": missing \"" + key + "\"");
  }
  const json& v = j.at(key);
  if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity")) {
    return std::numeric_limits<double>::infinity();
  }
  if (!v.is_number()) fail(what + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& key, const std::string& what, std::optional<int> dflt = {}) {
  if (!j.contains(key)) {
    if (dflt) return *dflt;
    fail(what + ": missing \"" + key + "\"");
  }
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(what + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

std::string text(const json& j, const std::string& key, const std::string& what) {
  if (!j.contains(key) || !j.at(key).is_string()) fail(what + ": \"" + key + "\" must be a string");
  return j.at(key).get<std::string>();
}

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

json vec(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json mat(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(num(m(i, c)));
    a.push_back(row);
  }
  return a;
}

// Wraps construction-time invariant failures as parse errors with context.
template <class F>
auto guarded(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    fail(what + ": " + e.what());
  }
}

}  // namespace

Generator generator_from_json(const json& j) {
  const std::string what = "generator";
  require_object(j, what);
  reject_unknown(j, {"family", "params"}, what);
  const std::string family = text(j, "family", what);
  const json params = j.contains("params") ? j.at("params") : json::object();
  require_object(params, what + ".params");
  const std::string pw = what + ".params";
  const double sill = number(params, "sill", pw, 1.0);
  return guarded(what, [&]() -> Generator {
    if (family == "exponential") {
      reject_unknown(params, {"sill", "scale"}, pw);
      return Generator::exponential(number(params, "scale", pw, 1.0), sill);
    }
    if (family == "powered_exponential") {
      reject_unknown(params, {"sill", "scale", "gamma"}, pw);
      return Generator::powered_exponential(number(params, "gamma", pw), number(params, "scale", pw, 1.0), sill);
    }
    if (family == "generalized_cauchy") {
      reject_unknown(params, {"sill", "scale", "a", "b"}, pw);
      return Generator::generalized_cauchy(number(params, "a", pw), number(params, "b", pw),
                                           number(params, "scale", pw, 1.0), sill);
    }
    if (family == "truncated_power") {
      reject_unknown(params, {"sill", "radius", "nu"}, pw);
      return Generator::truncated_power(number(params, "nu", pw), number(params, "radius", pw, 1.0), sill);
    }
    if (family == "triangle") {
      reject_unknown(params, {"sill", "radius"}, pw);
      return Generator::triangle(number(params, "radius", pw, 1.0), sill);
    }
    if (family == "spherical") {
      reject_unknown(params, {"sill", "radius"}, pw);
      return Generator::spherical(number(params, "radius", pw, 1.0), sill);
    }
    if (family == "askey_wendland") {
      reject_unknown(params, {"sill", "radius", "mu", "k"}, pw);
      return Generator::askey_wendland(number(params, "mu", pw), integer(params, "k", pw, 0),
                                       number(params, "radius", pw, 1.0), sill);
    }
    fail(what + ": unknown family \"" + family + "\"");
  });
}

json to_json(const Generator& g) {
  const auto& p = g.params();
  json params{{"sill", p.sill}};
  switch (g.family()) {
    case Family::Exponential: params["scale"] = p.scale; break;
    case Family::PoweredExponential:
      params["scale"] = p.scale;
      params["gamma"] = p.gamma;
      break;
    case Family::GeneralizedCauchy:
      params["scale"] = p.scale;
      params["a"] = p.a;
      params["b"] = p.b;
      break;
    case Family::TruncatedPower:
      params["radius"] = p.radius;
      params["nu"] = p.nu;
      break;
    case Family::Triangle:
    case Family::Spherical: params["radius"] = p.radius; break;
    case Family::AskeyWendland:
      params["radius"] = p.radius;
      params["mu"] = p.mu;
      params["k"] = p.k;
      break;
  }
  return {{"family", g.name()}, {"params", params}};
}

TemporalStructure temporal_from_json(const json& j) {
  const std::string what = "temporal";
  require_object(j, what);
  reject_unknown(j, {"family", "l", "params"}, what);
  const std::string family = text(j, "family", what);
  const int l = integer(j, "l", what, 1);
  const json params = j.contains("params") ? j.at("params") : json::object();
  const std::string pw = what + ".params";
  require_object(params, pw);
  return guarded(what, [&]() -> TemporalStructure {
    if (family == "pnorm_power") {
      reject_unknown(params, {"p", "alpha", "c"}, pw);
      return TemporalStructure::pnorm_power(l, number(params, "p", pw, 2.0), number(params, "alpha", pw),
                                            number(params, "c", pw, 1.0));
    }
    if (family == "bernstein") {
      reject_unknown(params, {"kind", "a", "b", "scale"}, pw);
      const std::string kind = params.contains("kind") ? text(params, "kind", pw) : "power";
      BernsteinKind k;
      if (kind == "power") {
        k = BernsteinKind::Power;
      } else if (kind == "log") {
        k = BernsteinKind::Log;
      } else {
        fail(pw + ": unknown kind \"" + kind + "\"");
      }
      return TemporalStructure::bernstein(l, k, number(params, "a", pw), number(params, "b", pw, 1.0),
                                          number(params, "scale", pw, 1.0));
    }
    if (family == "variogram") {
      reject_unknown(params, {"generator", "c"}, pw);
      if (!params.contains("generator")) fail(pw + ": missing \"generator\"");
      return TemporalStructure::variogram(l, generator_from_json(params.at("generator")),
                                          number(params, "c", pw, 1.0));
    }
    if (family == "constant") {
      reject_unknown(params, {"c"}, pw);
      return TemporalStructure::constant(l, number(params, "c", pw, 1.0));
    }
    fail(what + ": unknown family \"" + family + "\"");
  });
}

json to_json(const TemporalStructure& h) {
  json params;
  switch (h.family()) {
    case TemporalFamily::PNormPower:
      params = {{"p", num(h.p())}, {"alpha", h.alpha()}, {"c", h.c()}};
      break;
    case TemporalFamily::BernsteinComposite:
      params = {{"kind", h.bernstein_kind() == BernsteinKind::Power ? "power" : "log"},
                {"a", h.a()},
                {"b", h.b()},
                {"scale", h.scale()}};
      break;
    case TemporalFamily::VariogramDerived:
      params = {{"generator", to_json(*h.variogram_generator())}, {"c", h.c()}};
      break;
    case TemporalFamily::Constant: params = {{"c", h.c()}}; break;
  }
  json out{{"family", h.name()}, {"l", h.l()}, {"params", params}};
  if (h.exponent() != 1.0) out["power"] = h.exponent();
  return out;
}

HomogeneousNorm norm_from_json(const json& j) {
  double p = 0.0;
  if (j.is_number()) {
    p = j.get<double>();
  } else if (j.is_string() && (j.get<std::string>() == "inf" || j.get<std::string>() == "infinity")) {
    p = HomogeneousNorm::kInf;
  } else {
    fail("rho_p: expected a positive number or \"inf\"");
  }
  return guarded("rho_p", [&] { return HomogeneousNorm(p); });
}

json to_json(const HomogeneousNorm& rho) { return num(rho.p()); }

SpaceTimeKernel kernel_from_json(const json& j) {
  const std::string what = "kernel";
  require_object(j, what);
  reject_unknown(j, {"d", "generator", "temporal", "rho_p"}, what);
  const int d = integer(j, "d", what);
  if (!j.contains("generator")) fail(what + ": missing \"generator\"");
  if (!j.contains("temporal")) fail(what + ": missing \"temporal\"");
  const Generator g = generator_from_json(j.at("generator"));
  const TemporalStructure h = temporal_from_json(j.at("temporal"));
  const HomogeneousNorm rho = j.contains("rho_p") ? norm_from_json(j.at("rho_p")) : HomogeneousNorm::euclidean();
  return guarded(what, [&] { return SpaceTimeKernel(d, g, h, rho); });
}

json to_json(const SpaceTimeKernel& k) {
  return {{"d", k.d()}, {"generator", to_json(k.generator())}, {"temporal", to_json(k.temporal())},
          {"rho_p", to_json(k.norm())}};
}

json parse_json(const std::string& content, const std::string& origin) {
  try {
    return json::parse(content);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < content.size(); ++i) {
      if (content[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    fail(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

PointData read_points_csv(std::istream& in, int d, int l, bool with_values, const std::string& origin) {
  const int width = d + l + (with_values ? 1 : 0);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    std::vector<double> row;
    bool header = false;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      std::string s = fields[k];
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t") + 1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        if (first_data && k == 0 && !s.empty() && std::isalpha(static_cast<unsigned char>(s[0]))) {
          header = true;
          break;
        }
        fail(origin + ":" + std::to_string(lineno) + ": field " + std::to_string(k + 1) + ": not a finite number: \"" +
             s + "\"");
      }
      row.push_back(v);
    }
    first_data = false;
    if (header) continue;
    if (static_cast<int>(row.size()) != width) {
      fail(origin + ":" + std::to_string(lineno) + ": expected " + std::to_string(width) + " fields, found " +
           std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(origin + ": no data rows");
  PointData out;
  const auto n = static_cast<Eigen::Index>(rows.size());
  out.points.x.resize(n, d);
  out.points.t.resize(n, l);
  if (with_values) out.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) out.points.x(i, c) = rows[i][c];
    for (int c = 0; c < l; ++c) out.points.t(i, c) = rows[i][d + c];
    if (with_values) out.values(i) = rows[i][d + l];
  }
  return out;
}

PointData read_points_csv(const std::string& path, int d, int l, bool with_values) {
  std::ifstream in(path);
  if (!in) fail(path + ": cannot open file");
  return read_points_csv(in, d, l, with_values, path);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_curve_csv(std::ostream& out, const SpectralCurve& curve) {
  out << "s,value,error\n";
  for (const auto& s : curve.samples) {
    out << format_double(s.s) << ',' << format_double(s.value) << ',' << format_double(s.error) << '\n';
  }
}

json to_json(const SpectralCurve& c) {
  json samples = json::array();
  for (const auto& s : c.samples) {
    samples.push_back({{"s", num(s.s)}, {"value", num(s.value)}, {"error", num(s.error)}, {"flagged", s.flagged}});
  }
  json out{{"kind", to_string(c.kind)}, {"n", c.n}, {"samples", samples}};
  if (!c.direction.empty()) out["direction"] = vec(c.direction);
  return out;
}

json to_json(const PermissibilityVerdict& v) {
  json out{{"verdict", to_string(v.verdict)},
           {"lambda_grid", vec(v.lambda_grid)},
           {"configs_tested", v.configs_tested},
           {"random_configs_tested", v.random_configs_tested},
           {"worst_relative_eigenvalue", num(v.worst_relative_eigenvalue)},
           {"witness", nullptr}};
  if (v.witness) {
    out["witness"] = {{"points", mat(v.witness->points)},
                      {"lambda", v.witness->lambda},
                      {"min_eigenvalue", num(v.witness->min_eigenvalue)},
                      {"scale", num(v.witness->scale)}};
  }
  return out;
}

json to_json(const PdVerification& v) {
  json curves = json::array();
  for (const auto& c : v.curves) curves.push_back(to_json(c));
  return {{"verdict", to_string(v.verdict)}, {"reference", num(v.reference)}, {"min_value", num(v.min_value)},
          {"min_s", num(v.min_s)},           {"min_direction", vec(v.min_direction)}, {"flagged", v.flagged},
          {"curves", curves}};
}

json to_json(const NecessaryConditionReport& r) {
  json mono = json::array();
  for (const auto& m : r.monotone_f) {
    mono.push_back({{"m", m.m},
                    {"v", vec(m.v)},
                    {"verdict", to_string(m.verdict)},
                    {"worst_increase", num(m.worst_increase)},
                    {"worst_s", num(m.worst_s)},
                    {"min_value", num(m.min_value)},
                    {"note", m.note}});
  }
  json moments = json::array();
  for (const auto& row : r.moments) {
    moments.push_back({{"k", row.k},
                       {"alpha", vec(row.alpha)},
                       {"alpha_error", vec(row.alpha_error)},
                       {"beta", num(row.beta)},
                       {"beta_error", num(row.beta_error)}});
  }
  return {{"overall", to_string(r.overall)},
          {"vacuous", r.vacuous},
          {"monotone_f", mono},
          {"gd0_positive", r.gd0_positive},
          {"gd0_value", num(r.gd0_value)},
          {"gd0_error", num(r.gd0_error)},
          {"strict_decrease", to_string(r.strict_decrease)},
          {"moments", moments},
          {"q", r.q ? json(*r.q) : json(nullptr)},
          {"moment_signs_ok", r.moment_signs_ok},
          {"h_minimal_at_origin", r.h_minimal_at_origin},
          {"exp_hq_pd", to_json(r.exp_hq_pd)},
          {"violations", r.violations},
          {"notes", r.notes}};
}

json to_json(const LemmaCheck& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"t", vec(row.t)},
                    {"v", vec(row.v)},
                    {"direct", num(row.direct)},
                    {"scaled", num(row.scaled)},
                    {"deviation", num(row.deviation)}});
  }
  return {{"verdict", r.passed ? "PASS" : "FAIL"},
          {"max_deviation", num(r.max_deviation)},
          {"reference", num(r.reference)},
          {"rows", rows}};
}

json to_json(const KrigingResult& r) {
  json preds = json::array();
  for (Eigen::Index i = 0; i < r.predictions.size(); ++i) preds.push_back(num(r.predictions(i)));
  return {{"mode", to_string(r.mode)},
          {"predictions", preds},
          {"iterations", r.iterations},
          {"residual", num(r.residual)},
          {"entries_touched", num(r.entries_touched)},
          {"sparsity", num(r.sparsity)},
          {"wall_time_ms", num(r.wall_time_ms)}};
}

}  // namespace stcov::io
