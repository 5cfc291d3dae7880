#pragma once

#include <span>
#include <vector>

#include "stcov/generators.hpp"
#include "stcov/norms.hpp"
#include "stcov/quadrature.hpp"

namespace stcov {

enum class Precision {
  Automatic,  // extended for infinite support, double for compact generators
  Double,
  Extended,   // long double throughout
};

struct TransformOptions {
  Precision precision = Precision::Automatic;
  /// Tolerance relative to the integral of |integrand| for the outermost
  /// level; each inner level uses a third of its parent's.
  /// Zero selects 1e-16 (extended) or 1e-10 (double).
  double l1_rel_tol = 0.0;
  /// Tail mass allowed beyond the truncation ball, relative to the total.
  /// Zero selects 1e-20 (extended) or 1e-12 (double).
  double tail_rel_tol = 0.0;
  int max_panels = 400;
};

/// G_n(v) = integral over R^n of phi(rho(y)^2 / scale) e^{i(y, v)} dy, n <= 3,
/// by nested Gauss-Kronrod quadrature over the positive orthant (the
/// integrand is even in every coordinate, so only the cosine part survives).
Estimate<double> fourier_Gn(const Generator& gen, const HomogeneousNorm& rho, int n, std::span<const double> v,
                            double scale = 1.0, const TransformOptions& opt = {});

/// alpha_k(v) = integral over R^n of phi(rho(y)^2) (y, v)^{2k} dy, n <= 3.
Estimate<double> moment_alpha(const Generator& gen, const HomogeneousNorm& rho, int n, int k,
                              std::span<const double> v, const TransformOptions& opt = {});

/// beta_k = integral over R^n of phi(rho(y)^2) ||y||_2^{2k} dy, n <= 3, by
/// the same tensor scheme (for Euclidean rho moment_beta is cheaper).
Estimate<double> moment_beta_tensor(const Generator& gen, const HomogeneousNorm& rho, int n, int k,
                                    const TransformOptions& opt = {});

/// g_n(s) = integral_0^inf phi(u^2) u^{n-1} j_{n/2-1}(s u) du.
/// For s * support > 20 the range is split at the zeros of the Bessel
/// kernel; long oscillatory tails are summed with Wynn's epsilon algorithm.
Estimate<double> hankel_gn_at(const Generator& gen, int n, double s);

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the
/// limit estimate and an error estimate from the last two diagonals.
Estimate<double> wynn_epsilon(std::span<const double> partial_sums);

}  // namespace stcov
