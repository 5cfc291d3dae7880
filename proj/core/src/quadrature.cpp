#include "stcov/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <stdexcept>

namespace stcov {

namespace {

template <class Real, unsigned N>
KronrodRule<Real> build_rule() {
  namespace bq = boost::math::quadrature;
  const auto& kx = bq::gauss_kronrod<Real, N>::abscissa();
  const auto& kw = bq::gauss_kronrod<Real, N>::weights();
  const auto& gx = bq::gauss<Real, (N - 1) / 2>::abscissa();
  const auto& gw = bq::gauss<Real, (N - 1) / 2>::weights();

  KronrodRule<Real> rule;
  rule.nodes.assign(kx.begin(), kx.end());
  rule.kronrod.assign(kw.begin(), kw.end());
  rule.gauss.assign(kx.size(), Real(0));
  // Match Gauss nodes to their Kronrod positions by value.
  for (std::size_t i = 0; i < gx.size(); ++i) {
    for (std::size_t j = 0; j < kx.size(); ++j) {
      if (std::abs(kx[j] - gx[i]) <= 16 * std::numeric_limits<Real>::epsilon()) {
        rule.gauss[j] = gw[i];
        break;
      }
    }
  }
  return rule;
}

template <class Real>
const KronrodRule<Real>& lookup(int points) {
  static const KronrodRule<Real> r15 = build_rule<Real, 15>();
  static const KronrodRule<Real> r21 = build_rule<Real, 21>();
  static const KronrodRule<Real> r31 = build_rule<Real, 31>();
  static const KronrodRule<Real> r41 = build_rule<Real, 41>();
  static const KronrodRule<Real> r51 = build_rule<Real, 51>();
  static const KronrodRule<Real> r61 = build_rule<Real, 61>();
  switch (points) {
    case 15: return r15;
    case 21: return r21;
    case 31: return r31;
    case 41: return r41;
    case 51: return r51;
    case 61: return r61;
    default: throw std::invalid_argument("unsupported Gauss-Kronrod size " + std::to_string(points));
  }
}

}  // namespace

template <std::floating_point Real>
const KronrodRule<Real>& kronrod_rule(int points) {
  return lookup<Real>(points);
}

template const KronrodRule<double>& kronrod_rule<double>(int);
template const KronrodRule<long double>& kronrod_rule<long double>(int);

std::vector<double> geometric_breakpoints(double length_scale, double radius) {
  std::vector<double> bp{0.0};
  double x = length_scale / 16.0;
  while (x < radius) {
    bp.push_back(x);
    x *= 2.0;
  }
  bp.push_back(radius);
  return bp;
}

}  // namespace stcov
