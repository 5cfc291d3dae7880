#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "stcov/gneiting.hpp"
#include "stcov/sparse.hpp"

namespace stcov {

/// Compactly supported space-time correlation used for Schur-product
/// tapering: a compact Gneiting kernel, normalised to 1 at the origin, times
/// a Wendland factor (1 - r)_+^4 (1 + 4r) in r = ||t|| / temporal_range.
/// With a non-constant h the spatial reach widens with the time lag, so the
/// taper is nonseparable.
class Taper {
 public:
  /// Throws std::invalid_argument if the kernel generator is not compact.
  Taper(SpaceTimeKernel kernel, double temporal_range);

  /// Wendland generator (k = 1, smooth enough for R^d) with spatial reach
  /// `spatial_range` at lag zero and h(t) = 1 + coupling * ||t|| / temporal_range.
  /// coupling = 0 gives a separable taper.
  static Taper wendland(int d, int l, double spatial_range, double temporal_range, double coupling = 1.0,
                        HomogeneousNorm rho = HomogeneousNorm::euclidean());

  const SpaceTimeKernel& kernel() const { return kernel_; }
  double temporal_range() const { return temporal_range_; }
  /// Spatial reach at time lag zero.
  double spatial_range() const;
  /// Spatial reach at time lag t (0 beyond the temporal range).
  double spatial_reach(std::span<const double> t) const;

  double operator()(std::span<const double> x, std::span<const double> t) const;

 private:
  SpaceTimeKernel kernel_;
  double temporal_range_;
  double origin_;
};

/// Entry-wise product base * taper over the points. Pairs where the product
/// is exactly zero are not stored. Candidate pairs are found by a sweep over
/// the points sorted by the first time coordinate.
SparseSymMatrix taper_matrix(const SpaceTimeKernel& base, const Taper& taper, const SpaceTimePoints& pts);

/// Zero-mean Gaussian vector with covariance `cov`, from LDL^T and a seeded
/// mt19937_64. Pivots in (-1e-10 * max diag, 0] are clamped to zero; larger
/// negative pivots throw std::domain_error.
Eigen::VectorXd simulate_field(const Eigen::MatrixXd& cov, std::uint64_t seed);
/// `count` independent replicates as columns, sharing one factorization.
Eigen::MatrixXd simulate_fields(const Eigen::MatrixXd& cov, std::uint64_t seed, int count);

enum class KrigingMode { Exact, Tapered };
std::string to_string(KrigingMode m);

struct CovarianceSpec {
  SpaceTimeKernel base;
  std::optional<Taper> taper;
};

struct KrigingOptions {
  KrigingMode mode = KrigingMode::Exact;
  double tol = 1e-8;   // relative residual for the iterative solver
  int max_iter = 0;    // 0 means 10 * N
};

struct KrigingResult {
  KrigingMode mode = KrigingMode::Exact;
  Eigen::VectorXd predictions;
  int iterations = 0;
  double residual = 0.0;
  /// Reads of stored covariance entries by the solver: n^3/6 + n^2 for the
  /// dense factor-and-solve, (iterations + 1) * nnz for the iterative one.
  double entries_touched = 0.0;
  double sparsity = 0.0;  // fraction of zero entries in the solved matrix
  double wall_time_ms = 0.0;
};

/// Simple kriging c*^T C^{-1} z. Exact mode factors the dense covariance
/// (tapered if spec.taper is set); tapered mode needs spec.taper and runs
/// Jacobi-preconditioned conjugate gradients on the sparse matrix, throwing
/// SolverError past the iteration cap. A target that coincides with an
/// observation returns the observed value.
KrigingResult krige(const SpaceTimePoints& obs, const Eigen::VectorXd& z, const SpaceTimePoints& targets,
                    const CovarianceSpec& spec, const KrigingOptions& opt = {});

}  // namespace stcov
