#include "stcov/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "stcov/error.hpp"
#include "stcov/quadrature.hpp"
#include "stcov/special.hpp"

namespace stcov {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Askey-Wendland polynomial factor P_k(r), normalised so that P_k(0) = 1.
template <class Real>
Real wendland_poly(Real mu, int k, Real r) {
  switch (k) {
    case 0:
      return 1;
    case 1:
      return 1 + (mu + 1) * r;
    case 2: {
      const Real l = mu + 2;
      return 1 + l * r + (l * l - 1) / 3 * r * r;
    }
    default: {
      const Real l = mu;
      const Real c3 = (l * l * l + 9 * l * l + 23 * l + 15) / 15;
      const Real c2 = (6 * l * l + 36 * l + 45) / 15;
      const Real c1 = (15 * l + 45) / 15;
      return 1 + r * (c1 + r * (c2 + r * c3));
    }
  }
}

// phi for the CM families, as a function of u.
template <class Real>
Real cm_value(Family f, const Generator::Params& p, Real u) {
  const Real x = u / static_cast<Real>(p.scale);
  switch (f) {
    case Family::Exponential:
      return std::exp(-x);
    case Family::PoweredExponential:
      return std::exp(-std::pow(x, static_cast<Real>(p.gamma)));
    case Family::GeneralizedCauchy:
      return std::pow(1 + std::pow(x, static_cast<Real>(p.a)), -static_cast<Real>(p.b));
    default:
      return 0;
  }
}

// phi for the compact families, as a function of r = sqrt(u) / radius.
template <class Real>
Real compact_value(Family f, const Generator::Params& p, Real r) {
  if (r >= 1) return 0;
  const Real s = 1 - r;
  switch (f) {
    case Family::TruncatedPower:
      return std::pow(s, static_cast<Real>(p.nu));
    case Family::Triangle:
      return s;
    case Family::Spherical:
      return 1 - Real(1.5) * r + Real(0.5) * r * r * r;
    case Family::AskeyWendland: {
      const Real mu = static_cast<Real>(p.mu);
      return std::pow(s, mu + p.k) * wendland_poly(mu, p.k, r);
    }
    default:
      return 0;
  }
}

}  // namespace

Generator::Generator(Family family, const Params& params) : family_(family), params_(params) {
  require(std::isfinite(params.sill) && params.sill > 0.0, "generator sill must be positive (phi(0) > 0)");
  switch (family) {
    case Family::PoweredExponential:
      require(params.gamma > 0.0 && params.gamma <= 1.0, "powered exponential needs 0 < gamma <= 1");
      [[fallthrough]];
    case Family::Exponential:
      require(params.scale > 0.0 && std::isfinite(params.scale), "generator scale must be positive");
      break;
    case Family::GeneralizedCauchy:
      require(params.scale > 0.0 && std::isfinite(params.scale), "generator scale must be positive");
      require(params.a > 0.0 && params.a <= 1.0, "generalized Cauchy needs 0 < a <= 1");
      require(params.b > 0.0, "generalized Cauchy needs b > 0");
      break;
    case Family::TruncatedPower:
      require(params.nu > 0.0, "truncated power needs nu > 0");
      [[fallthrough]];
    case Family::Triangle:
    case Family::Spherical:
      require(params.radius > 0.0 && std::isfinite(params.radius), "support radius must be positive and finite");
      break;
    case Family::AskeyWendland:
      require(params.radius > 0.0 && std::isfinite(params.radius), "support radius must be positive and finite");
      require(params.mu > 0.0, "Askey-Wendland needs mu > 0");
      require(params.k >= 0 && params.k <= 3, "Askey-Wendland smoothness k must be in 0..3");
      break;
  }
}

Generator Generator::exponential(double scale, double sill) {
  Params p;
  p.scale = scale;
  p.sill = sill;
  return {Family::Exponential, p};
}

Generator Generator::powered_exponential(double gamma, double scale, double sill) {
  Params p;
  p.gamma = gamma;
  p.scale = scale;
  p.sill = sill;
  return {Family::PoweredExponential, p};
}

Generator Generator::generalized_cauchy(double a, double b, double scale, double sill) {
  Params p;
  p.a = a;
  p.b = b;
  p.scale = scale;
  p.sill = sill;
  return {Family::GeneralizedCauchy, p};
}

Generator Generator::truncated_power(double nu, double radius, double sill) {
  Params p;
  p.nu = nu;
  p.radius = radius;
  p.sill = sill;
  return {Family::TruncatedPower, p};
}

Generator Generator::triangle(double radius, double sill) {
  Params p;
  p.radius = radius;
  p.sill = sill;
  return {Family::Triangle, p};
}

Generator Generator::spherical(double radius, double sill) {
  Params p;
  p.radius = radius;
  p.sill = sill;
  return {Family::Spherical, p};
}

Generator Generator::askey_wendland(double mu, int k, double radius, double sill) {
  Params p;
  p.mu = mu;
  p.k = k;
  p.radius = radius;
  p.sill = sill;
  return {Family::AskeyWendland, p};
}

std::string Generator::name() const {
  switch (family_) {
    case Family::Exponential: return "exponential";
    case Family::PoweredExponential: return "powered_exponential";
    case Family::GeneralizedCauchy: return "generalized_cauchy";
    case Family::TruncatedPower: return "truncated_power";
    case Family::Triangle: return "triangle";
    case Family::Spherical: return "spherical";
    case Family::AskeyWendland: return "askey_wendland";
  }
  return "unknown";
}

bool Generator::is_compact() const {
  return family_ != Family::Exponential && family_ != Family::PoweredExponential &&
         family_ != Family::GeneralizedCauchy;
}

double Generator::support_radius() const {
  return is_compact() ? params_.radius : std::numeric_limits<double>::infinity();
}

double Generator::length_scale() const { return is_compact() ? params_.radius : std::sqrt(params_.scale); }

Generator Generator::with_support_radius(double radius) const {
  if (!is_compact()) throw std::invalid_argument("with_support_radius: generator has infinite support");
  Params p = params_;
  p.radius = radius;
  return {family_, p};
}

template <class Real>
Real Generator::eval_radial(Real r) const {
  if (is_compact()) return static_cast<Real>(params_.sill) * compact_value<Real>(family_, params_, r / static_cast<Real>(params_.radius));
  return static_cast<Real>(params_.sill) * cm_value<Real>(family_, params_, r * r);
}

double Generator::operator()(double u) const {
  if (!(u >= 0.0)) throw std::domain_error("generator argument must be nonnegative");
  if (is_compact()) return eval_radial<double>(std::sqrt(u));
  return params_.sill * cm_value<double>(family_, params_, u);
}

long double Generator::operator()(long double u) const {
  if (!(u >= 0.0L)) throw std::domain_error("generator argument must be nonnegative");
  if (is_compact()) return eval_radial<long double>(std::sqrt(u));
  return static_cast<long double>(params_.sill) * cm_value<long double>(family_, params_, u);
}

long double Generator::radial(long double r) const { return eval_radial<long double>(std::abs(r)); }

MonotonicityCheck check_completely_monotone(const Generator& gen, const std::vector<double>& xs, int max_order,
                                            double tol) {
  MonotonicityCheck out;
  for (double x : xs) {
    const double h = 0.05 * x;
    std::vector<double> f(static_cast<std::size_t>(max_order) + 1);
    for (int i = 0; i <= max_order; ++i) f[i] = gen(x + i * h);
    const double fx = std::abs(f[0]);
    // f[i] <- Delta^j f(x + i h) after j passes
    for (int j = 1; j <= max_order; ++j) {
      for (int i = 0; i + j <= max_order; ++i) f[i] = f[i + 1] - f[i];
      const double signed_diff = (j % 2 == 0 ? 1.0 : -1.0) * f[0];
      const double ratio = fx > 0.0 ? signed_diff / fx : signed_diff;
      if (ratio < out.worst_ratio) {
        out.worst_ratio = ratio;
        out.worst_x = x;
        out.worst_order = j;
      }
      if (signed_diff < -tol * fx) out.passed = false;
    }
  }
  return out;
}

MomentValue moment_beta(const Generator& gen, int d, int k) {
  if (d < 1) throw std::invalid_argument("moment_beta: dimension must be positive");
  if (k < 0) throw std::invalid_argument("moment_beta: order must be nonnegative");
  const int power = d + 2 * k - 1;
  auto integrand = [&](double u) { return static_cast<double>(gen.radial(u)) * std::pow(u, power); };

  QuadratureOptions opt;
  opt.rel_tol = 1e-12;
  double radius;
  double tail = 0.0;
  if (gen.is_compact()) {
    radius = gen.support_radius();
  } else {
    const RadialCutoff cut = find_radial_cutoff(integrand, gen.length_scale(), 1e-14, TailRule::PointwisePeak);
    radius = cut.radius;
    tail = cut.tail_estimate;
  }
  const std::vector<double> bp = geometric_breakpoints(gen.length_scale(), radius);
  const Estimate<double> e = integrate<double>(integrand, std::span<const double>(bp), opt);
  if (!e.converged && e.error > 1e-6 * std::abs(e.value)) {
    throw NonConvergenceError("moment_beta: radial quadrature did not converge");
  }
  const double area = sphere_area(d);
  return {k, d, area * e.value, area * (e.error + tail)};
}

std::optional<int> exponent_q(const Generator& gen, int d, int k_max) {
  if (k_max < 1) throw std::invalid_argument("exponent_q: k_max must be >= 1");
  for (int k = 1; k <= k_max; ++k) {
    const MomentValue m = moment_beta(gen, d, k);
    if (std::abs(m.value) > std::max(10.0 * m.abs_error_estimate, 1e-10)) return k;
  }
  return std::nullopt;
}

}  // namespace stcov
