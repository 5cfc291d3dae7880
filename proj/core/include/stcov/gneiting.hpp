#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stcov/generators.hpp"
#include "stcov/norms.hpp"
#include "stcov/temporal.hpp"

namespace stcov {

/// K(x, t) = h(t)^{-d/2} phi(rho(x)^2 / h(t)) on R^d x R^l.
class SpaceTimeKernel {
 public:
  SpaceTimeKernel(int d, Generator gen, TemporalStructure h, HomogeneousNorm rho = HomogeneousNorm::euclidean());

  int d() const { return d_; }
  int l() const { return h_.l(); }
  const Generator& generator() const { return gen_; }
  const TemporalStructure& temporal() const { return h_; }
  const HomogeneousNorm& norm() const { return rho_; }

  double operator()(std::span<const double> x, std::span<const double> t) const;
  double at_origin() const;

  /// Spatial reach at time lag t: rho(x) beyond this gives K = 0.
  double spatial_support(std::span<const double> t) const;

 private:
  int d_;
  Generator gen_;
  TemporalStructure h_;
  HomogeneousNorm rho_;
};

/// N space-time points; row i of x and t together form point i.
struct SpaceTimePoints {
  Eigen::MatrixXd x;  // N x d
  Eigen::MatrixXd t;  // N x l

  Eigen::Index size() const { return x.rows(); }
};

/// Dense Gram matrix K(x_i - x_j, t_i - t_j).
Eigen::MatrixXd assemble_cov_matrix(const SpaceTimeKernel& k, const SpaceTimePoints& pts);

/// Product-class kernel on (R^{d_1} x E_1) x ... x (R^{d_n} x E_n):
///   K = prod_k h_k(t_k)^{-d_k/2} * phi(rho_k(x_k)^2 / h_k(t_k), ...),
/// with phi a nonnegative mixture of products of CM generators.
class MultivariateKernel {
 public:
  struct Factor {
    int d;
    TemporalStructure h;
    HomogeneousNorm rho = HomogeneousNorm::euclidean();
  };
  struct Term {
    double weight;
    std::vector<Generator> generators;  // one per factor
  };

  MultivariateKernel(std::vector<Factor> factors, std::vector<Term> terms);

  /// A single product term with weight one.
  static MultivariateKernel product(std::vector<Factor> factors, std::vector<Generator> generators);

  std::size_t size() const { return factors_.size(); }
  const std::vector<Factor>& factors() const { return factors_; }
  const std::vector<Term>& terms() const { return terms_; }

  double operator()(const std::vector<std::vector<double>>& xs, const std::vector<std::vector<double>>& ts) const;

 private:
  std::vector<Factor> factors_;
  std::vector<Term> terms_;
};

}  // namespace stcov
