// stcov: batch front-end. Exit codes: 0 passed or consistent, 2 failed or
// violated, 1 could not check (bad input, nonconvergence).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stcov/error.hpp"
#include "stcov/io.hpp"
#include "stcov/necessary.hpp"
#include "stcov/spectral.hpp"
#include "stcov/tapering.hpp"
#include "stcov/temporal.hpp"

namespace {

using stcov::io::json;

constexpr int kPass = 0;
constexpr int kError = 1;
constexpr int kFail = 2;

struct Common {
  std::string gen = "exponential";
  std::string h = "pnorm_power";
  std::string rho_p = "2";
  std::string kernel;
  int dim = 2;
  int time_dim = 1;
  std::optional<double> s_max;
  std::optional<int> grid;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string out;
};

double parse_real(const std::string& s, const std::string& what) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw stcov::ParseError(what + ": not a number: \"" + s + "\"");
  return v;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item, what));
  return out;
}

// "family" or "family:key=value,key=value"; values are numbers, "inf", or words.
json shorthand(const std::string& text, const std::string& what) {
  const auto colon = text.find(':');
  json params = json::object();
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw stcov::ParseError(what + ": expected key=value, got \"" + item + "\"");
      const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
      try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        if (key == "k") {
          params[key] = static_cast<int>(v);
        } else {
          params[key] = v;
        }
      } catch (const std::exception&) {
        params[key] = value;
      }
    }
  }
  return {{"family", text.substr(0, colon)}, {"params", params}};
}

json descriptor(const std::string& text, const std::string& what) {
  if (!text.empty() && text.front() == '{') return stcov::io::parse_json(text, what);
  if (text.size() > 5 && text.ends_with(".json")) return stcov::io::load_json_file(text);
  return shorthand(text, what);
}

stcov::Generator make_generator(const std::string& text) {
  json j = descriptor(text, "--gen");
  // Families whose shape parameter has no natural default get one here.
  const std::string fam = j.value("family", "");
  json& p = j["params"];
  if (p.is_null()) p = json::object();
  if (fam == "powered_exponential" && !p.contains("gamma")) p["gamma"] = 0.5;
  if (fam == "generalized_cauchy" && !p.contains("a")) p["a"] = 1.0;
  if (fam == "generalized_cauchy" && !p.contains("b")) p["b"] = 1.0;
  if (fam == "truncated_power" && !p.contains("nu")) p["nu"] = 2.0;
  if (fam == "askey_wendland" && !p.contains("mu")) p["mu"] = 2.0;
  return stcov::io::generator_from_json(j);
}

stcov::TemporalStructure make_temporal(const std::string& text, int l) {
  json j = descriptor(text, "--h");
  if (!j.contains("l")) j["l"] = l;
  const std::string fam = j.value("family", "");
  json& p = j["params"];
  if (p.is_null()) p = json::object();
  if (fam == "pnorm_power" && !p.contains("alpha")) p["alpha"] = 1.0;
  if (fam == "bernstein" && !p.contains("a")) p["a"] = 0.5;
  return stcov::io::temporal_from_json(j);
}

stcov::HomogeneousNorm make_norm(const std::string& text) {
  return stcov::HomogeneousNorm(parse_real(text, "--rho-p"));
}

stcov::SpaceTimeKernel make_kernel(const Common& c) {
  if (!c.kernel.empty()) return stcov::io::kernel_from_json(descriptor(c.kernel, "--kernel"));
  return {c.dim, make_generator(c.gen), make_temporal(c.h, c.time_dim), make_norm(c.rho_p)};
}

void emit(const Common& c, const std::string& content) {
  if (c.out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw stcov::ParseError(c.out + ": cannot open for writing");
  f << content;
}

void emit_json(const Common& c, const json& j) { emit(c, j.dump(2) + "\n"); }

int exit_for(stcov::Verdict v) {
  switch (v) {
    case stcov::Verdict::Pass: return kPass;
    case stcov::Verdict::Fail: return kFail;
    case stcov::Verdict::Inconclusive: return kError;
  }
  return kError;
}

void add_common(CLI::App* app, Common& c, bool kernel_flags) {
  app->add_option("--gen", c.gen, "generator: family[:key=value,...], inline JSON or a .json file")
      ->capture_default_str();
  app->add_option("--rho-p", c.rho_p, "p of the spatial p-norm, or inf")->capture_default_str();
  app->add_option("--dim", c.dim, "spatial dimension")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "output file (default: stdout)");
  if (kernel_flags) {
    app->set_help_flag("--help", "print this help and exit");  // -h would clash with --h
    app->add_option("--h", c.h, "temporal structure: family[:key=value,...], inline JSON or a .json file")
        ->capture_default_str();
    app->add_option("--time-dim", c.time_dim, "temporal dimension l")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--kernel", c.kernel, "kernel descriptor (JSON file or inline); overrides --gen/--h/--dim/--rho-p");
  }
}

json read_kernel_inputs(const stcov::SpaceTimeKernel& k) { return stcov::io::to_json(k); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gneiting-class space-time covariances: evaluation, spectral checks, tapered kriging"};
  app.require_subcommand(1);
  Common c;

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate K(x, t)");
  add_common(eval, c, true);
  std::string xs = "0", ts = "0";
  eval->add_option("--x", xs, "spatial lag, comma separated")->capture_default_str();
  eval->add_option("--t", ts, "temporal lag, comma separated")->capture_default_str();

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "spectral density curve as CSV (s,value,error)");
  add_common(spectrum, c, false);
  spectrum->add_option("--s-max", c.s_max, "largest frequency (default 20)");
  spectrum->add_option("--grid", c.grid, "number of samples (default 101)");
  std::string direction;
  spectrum->add_option("--direction", direction, "ray direction for non-Euclidean norms (default: first axis)");

  // verify-pd
  auto* verify = app.add_subcommand("verify-pd", "Bochner check of phi(rho^2) in R^dim");
  add_common(verify, c, false);
  verify->add_option("--s-max", c.s_max, "largest frequency (default 20)");
  verify->add_option("--grid", c.grid, "number of samples (default 201)");
  verify->add_option("--tol", c.tol, "relative tolerance for negative values (default 1e-8)");

  // check-necessary
  auto* necessary = app.add_subcommand("check-necessary", "necessary-condition battery for a space-time kernel");
  add_common(necessary, c, true);
  necessary->add_option("--s-max", c.s_max, "upper end of the log-spaced s grid");
  necessary->add_option("--grid", c.grid, "number of grid points");
  necessary->add_option("--seed", c.seed, "seed for the e^{-lambda h^q} search")->capture_default_str();
  int k_max = 3;
  necessary->add_option("--k-max", k_max, "largest moment order")->capture_default_str()->check(CLI::PositiveNumber);

  // threshold-table
  auto* table = app.add_subcommand("threshold-table", "largest alpha with exp(-||t||_p^alpha) positive definite on R^n");
  std::optional<int> tn;
  std::string tp;
  table->add_option("--n", tn, "dimension n")->check(CLI::PositiveNumber);
  table->add_option("--p", tp, "p in (0, inf]");
  table->add_option("--out", c.out, "output file (default: stdout)");

  // taper-krige
  auto* krige = app.add_subcommand("taper-krige", "simple kriging, dense or with a sparse space-time taper");
  add_common(krige, c, true);
  std::string obs_path, target_path, taper_ranges, mode = "tapered";
  double coupling = 1.0;
  bool reproducible = false;
  krige->add_option("--obs", obs_path, "observations CSV: x1..xd,t1..tl,z")->required();
  krige->add_option("--targets", target_path, "targets CSV: x1..xd,t1..tl")->required();
  krige->add_option("--taper", taper_ranges, "taper ranges \"spatial,temporal\"");
  krige->add_option("--coupling", coupling, "space-time coupling of the taper (0: separable)")->capture_default_str();
  krige->add_option("--mode", mode, "exact or tapered")->check(CLI::IsMember({"exact", "tapered"}))->capture_default_str();
  krige->add_option("--tol", c.tol, "relative residual for the iterative solver (default 1e-8)");
  krige->add_flag("--reproducible", reproducible, "report wall_time_ms as 0 so outputs are byte-identical");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Gaussian field samples at given points");
  add_common(simulate, c, true);
  std::string points_path;
  int replicates = 1;
  simulate->add_option("--points", points_path, "points CSV: x1..xd,t1..tl")->required();
  simulate->add_option("--seed", c.seed, "random seed")->capture_default_str();
  simulate->add_option("--n", replicates, "number of replicates")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*eval) {
      const stcov::SpaceTimeKernel k = make_kernel(c);
      const auto x = parse_list(xs, "--x");
      const auto t = parse_list(ts, "--t");
      if (static_cast<int>(x.size()) != k.d()) throw stcov::ParseError("--x: expected " + std::to_string(k.d()) + " values");
      if (static_cast<int>(t.size()) != k.l()) throw stcov::ParseError("--t: expected " + std::to_string(k.l()) + " values");
      emit(c, stcov::io::format_double(k(x, t)) + "\n");
      return kPass;
    }

    if (*spectrum) {
      const stcov::Generator g = make_generator(c.gen);
      const stcov::HomogeneousNorm rho = make_norm(c.rho_p);
      const auto grid = stcov::uniform_grid(c.s_max.value_or(20.0), c.grid.value_or(101));
      stcov::SpectralCurve curve;
      if (rho.is_euclidean() && direction.empty()) {
        curve = stcov::hankel_gn(g, c.dim, grid);
      } else {
        std::vector<double> dir(static_cast<std::size_t>(c.dim), 0.0);
        dir[0] = 1.0;
        if (!direction.empty()) dir = parse_list(direction, "--direction");
        if (static_cast<int>(dir.size()) != c.dim) throw stcov::ParseError("--direction: expected " + std::to_string(c.dim) + " values");
        curve = stcov::spectral_along_ray(g, rho, c.dim, dir, grid);
      }
      std::ostringstream os;
      stcov::io::write_curve_csv(os, curve);
      emit(c, os.str());
      return kPass;
    }

    if (*verify) {
      const stcov::Generator g = make_generator(c.gen);
      const stcov::HomogeneousNorm rho = make_norm(c.rho_p);
      const auto res = stcov::verify_pd_radial(g, rho, c.dim, c.s_max.value_or(20.0), c.grid.value_or(201),
                                               c.tol.value_or(1e-8));
      json j = stcov::io::to_json(res);
      j["command"] = "verify-pd";
      j["inputs"] = {{"generator", stcov::io::to_json(g)}, {"rho_p", stcov::io::to_json(rho)}, {"dim", c.dim},
                     {"s_max", c.s_max.value_or(20.0)}, {"grid", c.grid.value_or(201)}, {"tol", c.tol.value_or(1e-8)}};
      emit_json(c, j);
      return exit_for(res.verdict);
    }

    if (*necessary) {
      const stcov::SpaceTimeKernel k = make_kernel(c);
      stcov::NecessaryOptions opt;
      opt.k_max = k_max;
      opt.seed = c.seed;
      if (c.s_max || c.grid) {
        const bool euclid = k.norm().is_euclidean();
        opt.s_grid = stcov::log_grid(1e-2, c.s_max.value_or(euclid ? 100.0 : 20.0), c.grid.value_or(euclid ? 64 : 32));
      }
      const auto rep = stcov::check_necessary(k, opt);
      json j = stcov::io::to_json(rep);
      j["command"] = "check-necessary";
      j["verdict"] = stcov::to_string(rep.overall);
      j["inputs"] = {{"kernel", read_kernel_inputs(k)}, {"seed", c.seed}, {"k_max", k_max}};
      emit_json(c, j);
      return rep.overall == stcov::Overall::Consistent ? kPass : kFail;
    }

    if (*table) {
      std::ostringstream os;
      if (tn && !tp.empty()) {
        os << stcov::io::format_double(stcov::stable_exponent_threshold(*tn, parse_real(tp, "--p"))) << "\n";
      } else if (!tn && tp.empty()) {
        os << "n,p,alpha\n";
        for (int n : {1, 2, 3, 5}) {
          for (double p : {0.5, 1.0, 1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
            os << n << ',' << stcov::io::format_double(p) << ','
               << stcov::io::format_double(stcov::stable_exponent_threshold(n, p)) << "\n";
          }
        }
      } else {
        throw stcov::ParseError("threshold-table: give both --n and --p, or neither for the full table");
      }
      emit(c, os.str());
      return kPass;
    }

    if (*krige) {
      const stcov::SpaceTimeKernel k = make_kernel(c);
      const auto obs = stcov::io::read_points_csv(obs_path, k.d(), k.l(), true);
      const auto targets = stcov::io::read_points_csv(target_path, k.d(), k.l(), false);
      stcov::CovarianceSpec spec{k, std::nullopt};
      if (!taper_ranges.empty()) {
        const auto r = parse_list(taper_ranges, "--taper");
        if (r.size() != 2) throw stcov::ParseError("--taper: expected \"spatial,temporal\"");
        spec.taper = stcov::Taper::wendland(k.d(), k.l(), r[0], r[1], coupling, k.norm());
      }
      stcov::KrigingOptions opt;
      opt.mode = mode == "exact" ? stcov::KrigingMode::Exact : stcov::KrigingMode::Tapered;
      opt.tol = c.tol.value_or(1e-8);
      auto res = stcov::krige(obs.points, obs.values, targets.points, spec, opt);
      if (reproducible) res.wall_time_ms = 0.0;
      json j = stcov::io::to_json(res);
      j["command"] = "taper-krige";
      j["verdict"] = "PASS";
      j["inputs"] = {{"kernel", read_kernel_inputs(k)}, {"observations", obs.points.size()},
                     {"targets", targets.points.size()}, {"tol", opt.tol}};
      if (spec.taper) {
        j["inputs"]["taper"] = {{"spatial_range", spec.taper->spatial_range()},
                                {"temporal_range", spec.taper->temporal_range()},
                                {"coupling", coupling}};
      }
      emit_json(c, j);
      return kPass;
    }

    if (*simulate) {
      const stcov::SpaceTimeKernel k = make_kernel(c);
      const auto pts = stcov::io::read_points_csv(points_path, k.d(), k.l(), false);
      const auto cov = stcov::assemble_cov_matrix(k, pts.points);
      const auto z = stcov::simulate_fields(cov, c.seed, replicates);
      std::ostringstream os;
      for (int i = 0; i < k.d(); ++i) os << 'x' << i + 1 << ',';
      for (int i = 0; i < k.l(); ++i) os << 't' << i + 1 << ',';
      for (int r = 0; r < replicates; ++r) os << 'z' << r + 1 << (r + 1 < replicates ? "," : "\n");
      for (Eigen::Index i = 0; i < z.rows(); ++i) {
        for (int a = 0; a < k.d(); ++a) os << stcov::io::format_double(pts.points.x(i, a)) << ',';
        for (int a = 0; a < k.l(); ++a) os << stcov::io::format_double(pts.points.t(i, a)) << ',';
        for (int r = 0; r < replicates; ++r) os << stcov::io::format_double(z(i, r)) << (r + 1 < replicates ? "," : "\n");
      }
      emit(c, os.str());
      return kPass;
    }
  } catch (const stcov::SolverError& e) {
    std::cerr << "stcov: error: " << e.what() << " (residual " << e.residual() << " after " << e.iterations()
              << " iterations)\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "stcov: error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
