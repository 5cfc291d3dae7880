#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace stcov {

enum class Family {
  Exponential,         // sill * exp(-u / scale)
  PoweredExponential,  // sill * exp(-(u / scale)^gamma), 0 < gamma <= 1
  GeneralizedCauchy,   // sill * (1 + (u / scale)^a)^(-b), 0 < a <= 1, b > 0
  TruncatedPower,      // sill * (1 - r)_+^nu, r = sqrt(u) / radius
  Triangle,            // sill * (1 - r)_+
  Spherical,           // sill * (1 - 1.5 r + 0.5 r^3) for r < 1
  AskeyWendland,       // sill * (1 - r)_+^(mu + k) P_k(r), k = 0..3
};

/// A radial generator phi on [0, inf). Kernels evaluate it at u = rho(x)^2,
/// so compact families vanish once sqrt(u) reaches support_radius().
class Generator {
 public:
  struct Params {
    double sill = 1.0;
    double scale = 1.0;   // CM families, in units of u
    double radius = 1.0;  // compact families, in units of sqrt(u)
    double gamma = 1.0;
    double a = 1.0;
    double b = 1.0;
    double nu = 1.0;
    double mu = 1.0;
    int k = 0;
  };

  static Generator exponential(double scale = 1.0, double sill = 1.0);
  static Generator powered_exponential(double gamma, double scale = 1.0, double sill = 1.0);
  static Generator generalized_cauchy(double a, double b, double scale = 1.0, double sill = 1.0);
  static Generator truncated_power(double nu, double radius = 1.0, double sill = 1.0);
  static Generator triangle(double radius = 1.0, double sill = 1.0);
  static Generator spherical(double radius = 1.0, double sill = 1.0);
  static Generator askey_wendland(double mu, int k, double radius = 1.0, double sill = 1.0);

  /// Validates the parameters for the family; throws std::invalid_argument.
  Generator(Family family, const Params& params);

  Family family() const { return family_; }
  const Params& params() const { return params_; }
  std::string name() const;

  bool is_compact() const;
  bool is_completely_monotone() const { return !is_compact(); }
  /// Every catalog family has a real-analytic Fourier transform.
  bool analytic_transform() const { return true; }

  /// Radius in sqrt(u) beyond which phi(u) = 0; +inf for CM families.
  double support_radius() const;
  /// Natural length in sqrt(u): the support radius, or sqrt(scale).
  double length_scale() const;

  Generator with_support_radius(double radius) const;

  /// phi(u); throws std::domain_error for u < 0.
  double operator()(double u) const;
  long double operator()(long double u) const;
  /// phi(r^2), avoiding the square root for compact families.
  long double radial(long double r) const;

  double at_origin() const { return params_.sill; }

 private:
  template <class Real>
  Real eval_radial(Real r) const;

  Family family_;
  Params params_;
};

/// Smoke test of complete monotonicity: forward differences of order up to
/// max_order at each x satisfy (-1)^j Delta^j phi(x) >= -tol * |phi(x)|.
struct MonotonicityCheck {
  bool passed = true;
  double worst_ratio = 0.0;  // most negative (-1)^j Delta^j phi / |phi|
  double worst_x = 0.0;
  int worst_order = 0;
};
MonotonicityCheck check_completely_monotone(const Generator& gen, const std::vector<double>& xs,
                                            int max_order = 4, double tol = 1e-6);

struct MomentValue {
  int k = 0;
  int d = 0;
  double value = 0.0;
  double abs_error_estimate = 0.0;
};

/// beta_k = integral over R^d of phi(|y|^2) |y|^{2k}, computed as the
/// sphere area times a radial integral. Throws NonConvergenceError on a
/// divergent tail.
MomentValue moment_beta(const Generator& gen, int d, int k);

/// Smallest k in [1, k_max] with |beta_k| > max(10 * error, 1e-10).
std::optional<int> exponent_q(const Generator& gen, int d, int k_max);

}  // namespace stcov
