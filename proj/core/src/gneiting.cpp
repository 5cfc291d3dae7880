#include "stcov/gneiting.hpp"

#include <cmath>
#include <stdexcept>

namespace stcov {

SpaceTimeKernel::SpaceTimeKernel(int d, Generator gen, TemporalStructure h, HomogeneousNorm rho)
    : d_(d), gen_(std::move(gen)), h_(std::move(h)), rho_(rho) {
  if (d < 1) throw std::invalid_argument("spatial dimension must be positive");
}

double SpaceTimeKernel::operator()(std::span<const double> x, std::span<const double> t) const {
  if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("space point has wrong dimension");
  const double ht = h_(t);
  const double r = rho_(x);
  return std::pow(ht, -0.5 * d_) * gen_(r * r / ht);
}

double SpaceTimeKernel::at_origin() const { return std::pow(h_.at_origin(), -0.5 * d_) * gen_.at_origin(); }

double SpaceTimeKernel::spatial_support(std::span<const double> t) const {
  return gen_.support_radius() * std::sqrt(h_(t));
}

Eigen::MatrixXd assemble_cov_matrix(const SpaceTimeKernel& k, const SpaceTimePoints& pts) {
  const Eigen::Index n = pts.size();
  if (n < 1) throw std::invalid_argument("assemble_cov_matrix: no points");
  if (pts.x.cols() != k.d() || pts.t.cols() != k.l() || pts.t.rows() != n) {
    throw std::invalid_argument("assemble_cov_matrix: point dimensions do not match the kernel");
  }
  Eigen::MatrixXd C(n, n);
  std::vector<double> dx(static_cast<std::size_t>(k.d()));
  std::vector<double> dt(static_cast<std::size_t>(k.l()));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      for (int c = 0; c < k.d(); ++c) dx[c] = pts.x(i, c) - pts.x(j, c);
      for (int c = 0; c < k.l(); ++c) dt[c] = pts.t(i, c) - pts.t(j, c);
      C(i, j) = C(j, i) = k(dx, dt);
    }
  }
  return C;
}

MultivariateKernel::MultivariateKernel(std::vector<Factor> factors, std::vector<Term> terms)
    : factors_(std::move(factors)), terms_(std::move(terms)) {
  if (factors_.empty()) throw std::invalid_argument("multivariate kernel needs at least one factor");
  if (terms_.empty()) throw std::invalid_argument("multivariate kernel needs at least one term");
  for (const Factor& f : factors_) {
    if (f.d < 1) throw std::invalid_argument("factor dimension must be positive");
  }
  for (const Term& term : terms_) {
    if (!(term.weight >= 0.0)) throw std::invalid_argument("mixture weights must be nonnegative");
    if (term.generators.size() != factors_.size()) {
      throw std::invalid_argument("each term needs one generator per factor");
    }
    for (const Generator& g : term.generators) {
      if (!g.is_completely_monotone()) {
        throw std::invalid_argument("product-class generators must be completely monotone");
      }
    }
  }
}

MultivariateKernel MultivariateKernel::product(std::vector<Factor> factors, std::vector<Generator> generators) {
  std::vector<Term> terms{{1.0, std::move(generators)}};
  return {std::move(factors), std::move(terms)};
}

double MultivariateKernel::operator()(const std::vector<std::vector<double>>& xs,
                                      const std::vector<std::vector<double>>& ts) const {
  if (xs.size() != factors_.size() || ts.size() != factors_.size()) {
    throw std::invalid_argument("argument count does not match the number of factors");
  }
  std::vector<double> u(factors_.size());
  double weight = 1.0;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    const Factor& f = factors_[k];
    if (static_cast<int>(xs[k].size()) != f.d) throw std::invalid_argument("space point has wrong dimension");
    const double hk = f.h(ts[k]);
    const double r = f.rho(xs[k]);
    u[k] = r * r / hk;
    weight *= std::pow(hk, -0.5 * f.d);
  }
  double phi = 0.0;
  for (const Term& term : terms_) {
    double prod = term.weight;
    for (std::size_t k = 0; k < u.size(); ++k) prod *= term.generators[k](u[k]);
    phi += prod;
  }
  return weight * phi;
}

}  // namespace stcov
