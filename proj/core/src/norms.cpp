#include "stcov/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace stcov {

HomogeneousNorm::HomogeneousNorm(double p) : p_(p) {
  if (!(p > 0.0)) throw std::invalid_argument("norm exponent p must be positive");
}

namespace {

template <class Real>
Real eval(double p, std::span<const Real> x) {
  if (p == HomogeneousNorm::kInf) {
    Real m = 0;
    for (Real v : x) m = std::max(m, std::abs(v));
    return m;
  }
  if (p == 2.0) {
    // Scaled to avoid overflow for large coordinates.
    Real m = 0;
    for (Real v : x) m = std::max(m, std::abs(v));
    if (m == 0) return 0;
    Real s = 0;
    for (Real v : x) s += (v / m) * (v / m);
    return m * std::sqrt(s);
  }
  if (p == 1.0) {
    Real s = 0;
    for (Real v : x) s += std::abs(v);
    return s;
  }
  Real m = 0;
  for (Real v : x) m = std::max(m, std::abs(v));
  if (m == 0) return 0;
  const Real pp = static_cast<Real>(p);
  Real s = 0;
  for (Real v : x) s += std::pow(std::abs(v) / m, pp);
  return m * std::pow(s, 1 / pp);
}

}  // namespace

double HomogeneousNorm::operator()(std::span<const double> x) const { return eval<double>(p_, x); }

long double HomogeneousNorm::operator()(std::span<const long double> x) const {
  return eval<long double>(p_, x);
}

long double HomogeneousNorm::slice_radius(long double radius, long double rest) const {
  if (is_max()) return rest <= radius ? radius : -1.0L;
  const long double pp = p_;
  const long double r = std::pow(radius, pp) - rest;
  if (r < 0) return -1.0L;
  return std::pow(r, 1.0L / pp);
}

long double HomogeneousNorm::accumulate(long double rest, long double y) const {
  if (is_max()) return std::max(rest, std::abs(y));
  return rest + std::pow(std::abs(y), static_cast<long double>(p_));
}

std::string HomogeneousNorm::describe() const {
  if (is_max()) return "l_inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "l_%g", p_);
  return buf;
}

}  // namespace stcov
