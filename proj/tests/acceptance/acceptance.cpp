// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "stcov/necessary.hpp"
#include "stcov/sparse.hpp"
#include "stcov/spectral.hpp"
#include "stcov/tapering.hpp"
#include "stcov/temporal.hpp"
#include "stcov/transforms.hpp"

using namespace stcov;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(const char* id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    out.pass = false;
    out.detail += " [over time budget of " + std::to_string(budget_s) + " s]";
  }
  if (!out.pass) ++failures;
  std::printf("%s %s %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.c_str(), secs);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Unit vector along (1, 2, 3) truncated to n coordinates.
std::vector<double> oblique(int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  double nn = 0;
  for (int i = 0; i < n; ++i) {
    v[i] = i + 1.0;
    nn += v[i] * v[i];
  }
  for (auto& x : v) x /= std::sqrt(nn);
  return v;
}

Outcome exponent_table() {
  // Four branches written out independently of the library.
  auto expected = [](int n, double p) {
    if (n == 1) return 2.0;
    if (p <= 2) return p;
    if (n == 2) return 1.0;
    return 0.0;
  };
  int bad = 0, total = 0;
  for (int n : {1, 2, 3, 5})
    for (double p : {0.5, 1.0, 1.5, 2.0, 3.0, kInf}) {
      ++total;
      if (stable_exponent_threshold(n, p) != expected(n, p)) ++bad;
    }
  return {bad == 0, std::to_string(total - bad) + "/" + std::to_string(total) + " entries exact"};
}

Outcome gaussian_identity() {
  double worst = 0;
  for (int d = 1; d <= 3; ++d)
    for (double sigma : {0.5, 1.0, 2.0})
      for (double s : {0.0, 1.0, 2.5, 5.0}) {
        auto v = oblique(d);
        for (auto& x : v) x *= s;
        const auto g = Generator::exponential(2 * sigma);
        const double got = fourier_Gn(g, HomogeneousNorm::euclidean(), d, v).value;
        const double want = std::pow(2 * kPi * sigma, 0.5 * d) * std::exp(-sigma * s * s / 2);
        worst = std::max(worst, std::abs(got - want) / want);
      }
  return {worst <= 1e-6, fmt("max relative error %.2e (limit 1e-6)", worst)};
}

Outcome euclidean_consistency() {
  const std::vector<Generator> catalog{
      Generator::exponential(),          Generator::powered_exponential(0.5), Generator::generalized_cauchy(1.0, 5.0),
      Generator::truncated_power(2.0),   Generator::triangle(),               Generator::spherical(),
      Generator::askey_wendland(2.0, 1)};
  TransformOptions opt;
  opt.precision = Precision::Double;
  opt.l1_rel_tol = 1e-6;
  opt.tail_rel_tol = 1e-7;
  double worst = 0;
  std::string where;
  for (const auto& g : catalog)
    for (int n = 1; n <= 3; ++n) {
      const double g0 = std::pow(2 * kPi, 0.5 * n) * hankel_gn_at(g, n, 0.0).value;
      for (double s : {0.0, 0.5, 2.0, 5.0}) {
        auto v = oblique(n);
        for (auto& x : v) x *= s;
        const double tensor = fourier_Gn(g, HomogeneousNorm::euclidean(), n, v, 1.0, opt).value;
        const double radial = std::pow(2 * kPi, 0.5 * n) * hankel_gn_at(g, n, s).value;
        const double rel = std::abs(tensor - radial) / g0;
        if (rel > worst) {
          worst = rel;
          where = g.name() + " n=" + std::to_string(n) + fmt(" s=%g", s);
        }
      }
    }
  return {worst <= 1e-6, fmt("max |G_n - (2pi)^(n/2) g_n| / G_n(0) = %.2e at ", worst) + where + " (limit 1e-6)"};
}

Outcome necessary_battery() {
  using TS = TemporalStructure;
  const auto euc = HomogeneousNorm::euclidean();
  std::vector<std::pair<std::string, SpaceTimeKernel>> valid{
      {"exp/pnorm a1 d2", SpaceTimeKernel(2, Generator::exponential(), TS::pnorm_power(1, 2, 1, 1))},
      {"exp0.5/pnorm a2 d1", SpaceTimeKernel(1, Generator::exponential(0.5), TS::pnorm_power(1, 2, 2, 0.5))},
      {"exp/bernstein-power d3",
       SpaceTimeKernel(3, Generator::exponential(), TS::bernstein(1, BernsteinKind::Power, 0.5, 1.0))},
      {"powexp0.5/pnorm a1.5 d2", SpaceTimeKernel(2, Generator::powered_exponential(0.5), TS::pnorm_power(1, 2, 1.5, 1))},
      {"powexp0.8/bernstein-log d1",
       SpaceTimeKernel(1, Generator::powered_exponential(0.8), TS::bernstein(1, BernsteinKind::Log, 1.0))},
      {"cauchy(1,3)/pnorm a1 d2", SpaceTimeKernel(2, Generator::generalized_cauchy(1, 3), TS::pnorm_power(1, 2, 1, 1))},
      {"cauchy(0.5,4)/bernstein-log d2",
       SpaceTimeKernel(2, Generator::generalized_cauchy(0.5, 4), TS::bernstein(1, BernsteinKind::Log, 1.0))},
      {"exp/variogram l2 d2", SpaceTimeKernel(2, Generator::exponential(), TS::variogram(2, Generator::exponential(), 1))},
      {"exp/pnorm l2 p1 d3", SpaceTimeKernel(3, Generator::exponential(), TS::pnorm_power(2, 1, 1, 1))},
      {"powexp0.5 l1-norm/pnorm d2",
       SpaceTimeKernel(2, Generator::powered_exponential(0.5), TS::pnorm_power(1, 2, 1, 1), HomogeneousNorm::lp(1))},
  };
  int consistent = 0;
  std::string bad;
  for (const auto& [name, k] : valid) {
    const auto r = check_necessary(k);
    if (r.overall == Overall::Consistent && !r.vacuous)
      ++consistent;
    else
      bad += " " + name;
  }
  const SpaceTimeKernel tri(3, Generator::triangle(), TS::pnorm_power(1, 2, 1, 1), euc);
  const bool violated = check_necessary(tri).overall == Overall::Violated;
  std::string detail = std::to_string(consistent) + "/10 valid kernels CONSISTENT";
  if (!bad.empty()) detail += " (not:" + bad + ")";
  detail += violated ? "; triangle d=3 VIOLATED" : "; triangle d=3 not VIOLATED";
  return {consistent == 10 && violated, detail};
}

std::vector<TimeConfig> line_configs(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double ranges[] = {1.0, 10.0, 100.0};
  std::vector<TimeConfig> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) {
    std::uniform_real_distribution<double> u(-ranges[i % 3], ranges[i % 3]);
    TimeConfig c;
    c.points.resize(20, 1);
    for (int j = 0; j < 20; ++j) c.points(j, 0) = u(rng);
    c.random = true;
    out.push_back(std::move(c));
  }
  return out;
}

Outcome contrapositive() {
  const std::vector<double> lambda{1.0};
  const auto configs = line_configs(10000, 2024);
  const auto cubic = check_exp_pd(TemporalStructure::pnorm_power(1, 2, 3, 1), lambda, configs, 7);
  const auto square = check_exp_pd(TemporalStructure::pnorm_power(1, 2, 2, 1), lambda, configs, 7);
  const bool found = cubic.verdict == Verdict::Fail && cubic.witness && cubic.witness->min_eigenvalue < -1e-6;
  const bool clean = square.verdict != Verdict::Fail;
  std::string detail = "alpha=3: ";
  detail += found ? fmt("eigenvalue %.3e found", cubic.witness->min_eigenvalue) : "no eigenvalue below -1e-6";
  detail += fmt(" after %g configs; alpha=2: ", cubic.configs_tested);
  detail += clean ? fmt("no FAIL in %g configs", square.configs_tested) : "FAIL";
  return {found && clean, detail};
}

Outcome tapering_suite() {
  // PD of tapered Gneiting matrices.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  int pd_fail = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 3;
    const int n = 50 + static_cast<int>(U(rng) * 150);
    const Generator g = trial % 2 ? Generator::exponential(0.5 + U(rng))
                                  : Generator::generalized_cauchy(0.5 + 0.5 * U(rng), 0.5 + 2 * U(rng));
    const auto h = TemporalStructure::pnorm_power(1, 2, 0.5 + 1.5 * U(rng), 0.2 + U(rng));
    const SpaceTimeKernel base(d, g, h);
    SpaceTimePoints p;
    p.x.resize(n, d);
    p.t.resize(n, 1);
    const double side = 2 + 5 * U(rng);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < d; ++c) p.x(i, c) = side * U(rng);
      p.t(i, 0) = side * U(rng);
    }
    const Taper taper = Taper::wendland(d, 1, 0.5 + 2 * U(rng), 0.5 + 2 * U(rng), 2 * U(rng));
    if (chol_pd_check(taper_matrix(base, taper, p)).verdict != PdCheck::Pass) ++pd_fail;
  }

  // Monitoring campaign: 5 stations, 10 blocks of 6 consecutive times.
  const double sites[5][2] = {{0, 0}, {0.6, 0.2}, {0.3, 0.9}, {1.0, 0.7}, {0.5, 0.5}};
  const double gap = 60;
  SpaceTimePoints obs;
  obs.x.resize(300, 2);
  obs.t.resize(300, 1);
  int r = 0;
  for (const auto& s : sites)
    for (int b = 0; b < 10; ++b)
      for (int k = 0; k < 6; ++k, ++r) {
        obs.x(r, 0) = s[0];
        obs.x(r, 1) = s[1];
        obs.t(r, 0) = b * gap + k;
      }
  const SpaceTimeKernel base(2, Generator::powered_exponential(0.5, 0.25), TemporalStructure::pnorm_power(1, 2, 1, 1));
  const Eigen::VectorXd z = simulate_field(assemble_cov_matrix(base, obs), 5);
  std::mt19937_64 trng(3);
  SpaceTimePoints targets;
  targets.x.resize(50, 2);
  targets.t.resize(50, 1);
  for (int i = 0; i < 50; ++i) {
    if (i % 2) {
      targets.x(i, 0) = U(trng);
      targets.x(i, 1) = U(trng);
    } else {
      targets.x(i, 0) = sites[i % 5][0];
      targets.x(i, 1) = sites[i % 5][1];
    }
    targets.t(i, 0) = (i % 10) * gap + 5 * U(trng);
  }
  const auto exact = krige(obs, z, targets, {base, std::nullopt}, {KrigingMode::Exact});
  const auto tapered =
      krige(obs, z, targets, {base, Taper::wendland(2, 1, 50.0, gap - 6, 1.0)}, {KrigingMode::Tapered});
  const double dev =
      (exact.predictions - tapered.predictions).cwiseAbs().maxCoeff() / std::sqrt(base.at_origin());

  const bool ok = pd_fail == 0 && dev <= 5e-2 && tapered.sparsity >= 0.85 &&
                  tapered.entries_touched < exact.entries_touched;
  std::string detail = std::to_string(100 - pd_fail) + "/100 tapered matrices PD";
  detail += fmt("; deviation %.4f sd (limit 0.05)", dev);
  detail += fmt("; zero entries %.1f%% (min 85%%)", 100 * tapered.sparsity);
  detail += fmt("; entries touched %.3g sparse", tapered.entries_touched);
  detail += fmt(" vs %.3g dense", exact.entries_touched);
  return {ok, detail};
}

Outcome fejer() {
  const auto tri = Generator::triangle();
  double min_value = kInf, worst_closed = 0, worst_zero = 0;
  for (int i = 0; i <= 4000; ++i) {
    const double s = 100.0 * i / 4000;
    const double g = hankel_gn_at(tri, 1, s).value;
    min_value = std::min(min_value, g);
    const double closed = s == 0 ? 1 / std::sqrt(2 * kPi) : std::sqrt(2 / kPi) * (1 - std::cos(s)) / (s * s);
    worst_closed = std::max(worst_closed, std::abs(g - closed));
  }
  for (int k = 1; k <= 5; ++k) {
    const double g = hankel_gn_at(tri, 1, 2 * kPi * k).value;
    worst_zero = std::max(worst_zero, std::abs(g));
    min_value = std::min(min_value, g);
  }
  const bool ok = min_value >= -1e-10 && worst_zero <= 1e-8 && worst_closed <= 1e-8;
  return {ok, fmt("min g_1 = %.2e (limit -1e-10)", min_value) + fmt("; max |g_1(2 pi k)| = %.2e", worst_zero) +
                  fmt("; max closed-form error %.2e", worst_closed)};
}

Outcome lemma() {
  using TS = TemporalStructure;
  struct Case {
    const char* name;
    Generator gen;
    HomogeneousNorm rho;
    TemporalStructure h;
    int d;
  };
  const std::vector<Case> cases{
      {"gaussian d2", Generator::exponential(), HomogeneousNorm::euclidean(), TS::pnorm_power(1, 2, 2, 1), 2},
      {"triangle d1", Generator::triangle(), HomogeneousNorm::euclidean(), TS::pnorm_power(1, 2, 1, 1), 1},
      {"wendland l1 d2", Generator::askey_wendland(2.0, 1), HomogeneousNorm::lp(1),
       TS::bernstein(1, BernsteinKind::Power, 0.5, 1.0), 2},
  };
  const std::vector<double> ts{0.0, 0.5, 1.0, 2.0, 4.0};
  const std::vector<double> ss{0.0, 0.7, 1.5, 3.0, 5.0};
  double worst = 0;
  bool all = true;
  for (const auto& c : cases) {
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      auto v = oblique(c.d);
      for (auto& x : v) x *= ss[i];
      pairs.push_back({{ts[i]}, v});
    }
    const auto r = lemma_consistency_test(c.gen, c.rho, c.h, c.d, pairs);
    all = all && r.passed;
    worst = std::max(worst, r.max_deviation / r.reference);
  }
  return {all, fmt("max deviation / G_d(0) = %.2e over 3 kernels x 5 pairs (limit 1e-6)", worst)};
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  run("C1", "exponent threshold table", 1, exponent_table);
  run("C2", "Gaussian spectral identity", 30, gaussian_identity);
  run("C3", "Euclidean consistency", 0, euclidean_consistency);
  run("C4", "necessary-condition battery", 120, necessary_battery);
  run("C5", "contrapositive matrix test", 0, contrapositive);
  run("C6", "Schur product tapering", 120, tapering_suite);
  run("C7", "Fejer positivity", 0, fejer);
  run("C8", "lemma consistency", 0, lemma);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
