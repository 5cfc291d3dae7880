#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace stcov {

/// Symmetric matrix in compressed-row form with both triangles stored, so a
/// product is a single pass over the rows. The diagonal is always present.
class SparseSymMatrix {
 public:
  struct Entry {
    int col;
    double value;
  };

  /// Rows may list entries in any order and must already be symmetric
  /// (j in row i iff i in row j, with equal values).
  static SparseSymMatrix from_rows(int n, std::vector<std::vector<Entry>> rows);
  /// Keeps entries with |a_ij| > drop_tol (and the whole diagonal).
  static SparseSymMatrix from_dense(const Eigen::MatrixXd& a, double drop_tol = 0.0);

  int size() const { return n_; }
  std::size_t nnz() const { return values_.size(); }
  /// Fraction of the n^2 entries that are not stored.
  double zero_fraction() const;

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& cols() const { return cols_; }
  const std::vector<double>& values() const { return values_; }

  double operator()(int i, int j) const;
  Eigen::VectorXd diagonal() const;
  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::MatrixXd to_dense() const;

 private:
  int n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> values_;
};

enum class PdCheck { Pass, Fail };

struct FactorCheck {
  PdCheck verdict = PdCheck::Pass;
  double min_pivot = 0.0;
  int failed_at = -1;  // index of the offending pivot, -1 on PASS
};

/// Symmetric LDL^T factorization without pivoting. PASS iff every pivot is
/// above -1e-10 * (largest diagonal entry). Pivots within that band are
/// treated as zero; the remaining entries of such a column must then vanish
/// too, otherwise the matrix is indefinite.
FactorCheck chol_pd_check(const Eigen::MatrixXd& a);
FactorCheck chol_pd_check(const SparseSymMatrix& a);

}  // namespace stcov
