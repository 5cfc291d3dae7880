#include "stcov/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stcov {

std::string to_string(CurveKind k) {
  switch (k) {
    case CurveKind::HankelGn: return "g_n";
    case CurveKind::FourierGnRay: return "G_n_ray";
    case CurveKind::Fmv: return "f_mv";
  }
  return "g_n";
}

namespace {

void check_grid(std::span<const double> s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] >= 0.0)) throw std::invalid_argument("s-grid must be nonnegative");
    if (i > 0 && !(s[i] > s[i - 1])) throw std::invalid_argument("s-grid must be strictly increasing");
  }
}

void flag(SpectralCurve& c, double origin) {
  for (SpectralSample& p : c.samples) p.flagged = p.error > 1e-6 * std::abs(origin);
}

}  // namespace

SpectralCurve hankel_gn(const Generator& gen, int n, std::span<const double> s_grid) {
  check_grid(s_grid);
  SpectralCurve c;
  c.kind = CurveKind::HankelGn;
  c.n = n;
  for (double s : s_grid) {
    const Estimate<double> e = hankel_gn_at(gen, n, s);
    c.samples.push_back({s, e.value, e.error, false});
  }
  const double origin = (!s_grid.empty() && s_grid[0] == 0.0) ? c.samples[0].value : hankel_gn_at(gen, n, 0.0).value;
  flag(c, origin);
  return c;
}

SpectralCurve spectral_along_ray(const Generator& gen, const HomogeneousNorm& rho, int n,
                                 std::span<const double> direction, std::span<const double> s_grid,
                                 const TransformOptions& opt) {
  check_grid(s_grid);
  if (static_cast<int>(direction.size()) != n) throw std::invalid_argument("direction has wrong dimension");
  double norm = 0.0;
  for (double x : direction) norm += x * x;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw std::invalid_argument("direction must be nonzero");
  SpectralCurve c;
  c.kind = CurveKind::FourierGnRay;
  c.n = n;
  for (double x : direction) c.direction.push_back(x / norm);

  if (rho.is_euclidean()) {
    const double factor = std::pow(2.0 * std::numbers::pi, 0.5 * n);
    for (double s : s_grid) {
      const Estimate<double> e = hankel_gn_at(gen, n, s);
      c.samples.push_back({s, factor * e.value, factor * e.error, false});
    }
    flag(c, factor * hankel_gn_at(gen, n, 0.0).value);
    return c;
  }
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double s : s_grid) {
    for (int i = 0; i < n; ++i) v[i] = s * c.direction[i];
    const Estimate<double> e = fourier_Gn(gen, rho, n, v, 1.0, opt);
    c.samples.push_back({s, e.value, e.error, false});
  }
  std::fill(v.begin(), v.end(), 0.0);
  flag(c, fourier_Gn(gen, rho, n, v, 1.0, opt).value);
  return c;
}

std::vector<double> uniform_grid(double s_max, int count) {
  if (count < 2 || !(s_max > 0.0)) throw std::invalid_argument("uniform_grid: need s_max > 0 and count >= 2");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[i] = s_max * i / (count - 1);
  return g;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (count < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi, count >= 2");
  std::vector<double> g(static_cast<std::size_t>(count));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) g[i] = std::exp(a + (b - a) * i / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

PdVerification verify_pd_radial(const Generator& gen, const HomogeneousNorm& rho, int n, double s_max,
                                int n_samples, double tol) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (!rho.is_euclidean() && n > 3) throw std::invalid_argument("non-Euclidean norms are supported for n <= 3");
  const std::vector<double> grid = uniform_grid(s_max, n_samples);
  PdVerification out;
  if (rho.is_euclidean()) {
    out.curves.push_back(hankel_gn(gen, n, grid));
  } else {
    TransformOptions opt;
    opt.precision = Precision::Double;
    std::vector<double> axis(static_cast<std::size_t>(n), 0.0);
    axis[0] = 1.0;
    out.curves.push_back(spectral_along_ray(gen, rho, n, axis, grid, opt));
    if (n > 1) {
      const std::vector<double> diag(static_cast<std::size_t>(n), 1.0);
      out.curves.push_back(spectral_along_ray(gen, rho, n, diag, grid, opt));
    }
  }
  out.reference = out.curves[0].samples[0].value;
  out.min_value = out.reference;
  for (const SpectralCurve& c : out.curves) {
    for (const SpectralSample& p : c.samples) {
      if (p.flagged) ++out.flagged;
      if (p.value < out.min_value) {
        out.min_value = p.value;
        out.min_s = p.s;
        out.min_direction = c.direction;
      }
    }
  }
  out.verdict = out.min_value >= -tol * out.reference ? Verdict::Pass : Verdict::Fail;
  return out;
}

LemmaCheck lemma_consistency_test(const Generator& gen, const HomogeneousNorm& rho, const TemporalStructure& h,
                                  int d, const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs) {
  if (d < 1 || d > 3) throw std::invalid_argument("lemma_consistency_test supports d = 1, 2, 3");
  // The two sides use different rules so that they share no nodes.
  TransformOptions opt;
  opt.precision = Precision::Double;
  TransformOptions direct_opt;
  direct_opt.precision = Precision::Extended;
  direct_opt.l1_rel_tol = 1e-12;
  direct_opt.tail_rel_tol = 1e-14;
  LemmaCheck out;
  const std::vector<double> zero(static_cast<std::size_t>(d), 0.0);
  out.reference = fourier_Gn(gen, rho, d, zero, 1.0, opt).value;
  for (const auto& [t, v] : pairs) {
    if (static_cast<int>(v.size()) != d) throw std::invalid_argument("frequency has wrong dimension");
    const double ht = h(t);
    const double root = std::sqrt(ht);
    std::vector<double> scaled_v(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) scaled_v[i] = root * v[i];
    const double direct = fourier_Gn(gen, rho, d, v, ht, direct_opt).value;
    const double scaled = std::pow(ht, 0.5 * d) * fourier_Gn(gen, rho, d, scaled_v, 1.0, opt).value;
    const double dev = std::abs(direct - scaled);
    out.rows.push_back({t, v, direct, scaled, dev});
    out.max_deviation = std::max(out.max_deviation, dev);
  }
  out.passed = out.max_deviation <= 1e-6 * out.reference;
  return out;
}

}  // namespace stcov
