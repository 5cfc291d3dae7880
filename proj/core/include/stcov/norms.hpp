#pragma once

#include <limits>
#include <span>
#include <string>

namespace stcov {

/// The p-"norm" (sum |x_i|^p)^{1/p} for 0 < p < inf, and max |x_i| for p = inf.
/// For p < 1 this is only a quasi-norm, but it is still continuous, positive
/// off the origin and homogeneous of degree one, which is all the kernels need.
class HomogeneousNorm {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  static HomogeneousNorm euclidean() { return HomogeneousNorm(2.0); }
  static HomogeneousNorm lp(double p) { return HomogeneousNorm(p); }
  static HomogeneousNorm max_norm() { return HomogeneousNorm(kInf); }

  HomogeneousNorm() : HomogeneousNorm(2.0) {}
  explicit HomogeneousNorm(double p);

  double p() const { return p_; }
  bool is_max() const { return p_ == kInf; }
  bool is_euclidean() const { return p_ == 2.0; }

  double operator()(std::span<const double> x) const;
  long double operator()(std::span<const long double> x) const;

  /// Largest coordinate magnitude allowed for y_i when every other
  /// coordinate is given and rho(y) <= radius; `rest` holds
  /// sum |y_j|^p over the other coordinates (max |y_j| when p = inf).
  /// Negative when the slice is empty.
  long double slice_radius(long double radius, long double rest) const;
  /// Accumulates one coordinate into the `rest` quantity of slice_radius.
  long double accumulate(long double rest, long double y) const;

  std::string describe() const;

 private:
  double p_;
};

}  // namespace stcov
