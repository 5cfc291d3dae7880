#include "stcov/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>

namespace stcov {

namespace {

// Power series sum_k (-1)^k (u^2/4)^k / (k! Gamma(k + lambda + 1)), scaled by
// 2^-lambda. Converges fast for u < 2 and has no cancellation there.
double series(double lambda, double u) {
  const double x = 0.25 * u * u;
  double term = 1.0 / std::tgamma(lambda + 1.0);
  double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= -x / (k * (k + lambda));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum * std::exp2(-lambda);
}

}  // namespace

double bessel_j_norm(double lambda, double u) {
  if (!(lambda >= -0.5)) throw std::domain_error("bessel_j_norm: order must be >= -1/2");
  if (!(u >= 0.0)) throw std::domain_error("bessel_j_norm: argument must be >= 0");
  if (lambda == -0.5) return std::sqrt(2.0 / std::numbers::pi) * std::cos(u);
  if (lambda == 0.5) {
    return u < 1e-4 ? std::sqrt(2.0 / std::numbers::pi) * (1.0 - u * u / 6.0)
                    : std::sqrt(2.0 / std::numbers::pi) * std::sin(u) / u;
  }
  if (u < 2.0) return series(lambda, u);
  return boost::math::cyl_bessel_j(lambda, u) / std::pow(u, lambda);
}

std::vector<double> bessel_zeros_below(double lambda, double limit, std::size_t max_count) {
  std::vector<double> zeros;
  for (int m = 1; zeros.size() < max_count; ++m) {
    double z;
    if (lambda == -0.5) {
      z = (m - 0.5) * std::numbers::pi;
    } else if (lambda == 0.5) {
      z = m * std::numbers::pi;
    } else {
      z = boost::math::cyl_bessel_j_zero(lambda, m);
    }
    if (!(z < limit)) break;
    zeros.push_back(z);
  }
  return zeros;
}

double sphere_area(int d) {
  if (d < 1) throw std::domain_error("sphere_area: dimension must be positive");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace stcov
