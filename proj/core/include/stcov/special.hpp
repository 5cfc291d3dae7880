#pragma once

#include <cstddef>
#include <vector>

namespace stcov {

/// Normalised Bessel function j_lambda(u) = J_lambda(u) / u^lambda, with the
/// removable singularity filled in: j_lambda(0) = 1 / (2^lambda Gamma(lambda+1)).
/// Requires lambda >= -1/2 and u >= 0.
double bessel_j_norm(double lambda, double u);

/// Positive zeros of J_lambda that are smaller than limit, in increasing
/// order, at most max_count of them.
std::vector<double> bessel_zeros_below(double lambda, double limit, std::size_t max_count = 1000000);

/// Area of the unit sphere S^{d-1} in R^d, 2 pi^{d/2} / Gamma(d/2).
/// For d = 1 this is 2 (the two points +1 and -1).
double sphere_area(int d);

}  // namespace stcov
