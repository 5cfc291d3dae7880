#include "stcov/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stcov {

SparseSymMatrix SparseSymMatrix::from_rows(int n, std::vector<std::vector<Entry>> rows) {
  if (static_cast<int>(rows.size()) != n) throw std::invalid_argument("from_rows: row count mismatch");
  SparseSymMatrix m;
  m.n_ = n;
  m.row_ptr_.assign(1, 0);
  for (int i = 0; i < n; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    bool has_diag = false;
    for (const Entry& e : r) {
      if (e.col < 0 || e.col >= n) throw std::invalid_argument("from_rows: column out of range");
      if (e.col == i) has_diag = true;
    }
    if (!has_diag) {
      r.insert(std::lower_bound(r.begin(), r.end(), i, [](const Entry& a, int c) { return a.col < c; }), {i, 0.0});
    }
    for (const Entry& e : r) {
      m.cols_.push_back(e.col);
      m.values_.push_back(e.value);
    }
    m.row_ptr_.push_back(m.cols_.size());
  }
  return m;
}

SparseSymMatrix SparseSymMatrix::from_dense(const Eigen::MatrixXd& a, double drop_tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("from_dense: matrix must be square");
  const int n = static_cast<int>(a.rows());
  std::vector<std::vector<Entry>> rows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || std::abs(a(i, j)) > drop_tol) rows[i].push_back({j, a(i, j)});
    }
  }
  return from_rows(n, std::move(rows));
}

double SparseSymMatrix::zero_fraction() const {
  if (n_ == 0) return 0.0;
  return 1.0 - static_cast<double>(nnz()) / (static_cast<double>(n_) * n_);
}

double SparseSymMatrix::operator()(int i, int j) const {
  const auto b = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto e = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(b, e, j);
  if (it == e || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

Eigen::VectorXd SparseSymMatrix::diagonal() const {
  Eigen::VectorXd d(n_);
  for (int i = 0; i < n_; ++i) d(i) = (*this)(i, i);
  return d;
}

void SparseSymMatrix::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  y.resize(n_);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x(cols_[k]);
    y(i) = s;
  }
}

Eigen::MatrixXd SparseSymMatrix::to_dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) a(i, cols_[k]) = values_[k];
  }
  return a;
}

FactorCheck chol_pd_check(const Eigen::MatrixXd& a_in) {
  if (a_in.rows() != a_in.cols()) throw std::invalid_argument("chol_pd_check: matrix must be square");
  const Eigen::Index n = a_in.rows();
  FactorCheck out;
  if (n == 0) return out;
  const double scale = a_in.diagonal().cwiseAbs().maxCoeff();
  const double tol = 1e-10 * scale;
  const double col_tol = std::sqrt(1e-10) * scale;
  // Right-looking elimination on the lower triangle of a working copy.
  Eigen::MatrixXd a = a_in;
  out.min_pivot = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double pivot = a(k, k);
    out.min_pivot = std::min(out.min_pivot, pivot);
    if (pivot < -tol) {
      out.verdict = PdCheck::Fail;
      out.failed_at = static_cast<int>(k);
      return out;
    }
    if (pivot <= tol) {
      // Numerically zero pivot: the rest of the column has to vanish as well.
      for (Eigen::Index i = k + 1; i < n; ++i) {
        if (std::abs(a(i, k)) > col_tol) {
          out.verdict = PdCheck::Fail;
          out.failed_at = static_cast<int>(k);
          return out;
        }
      }
      continue;
    }
    const Eigen::Index m = n - k - 1;
    if (m == 0) break;
    const Eigen::VectorXd l = a.col(k).tail(m) / pivot;
    a.bottomRightCorner(m, m).template triangularView<Eigen::Lower>() -= pivot * l * l.transpose();
  }
  return out;
}

FactorCheck chol_pd_check(const SparseSymMatrix& a) { return chol_pd_check(a.to_dense()); }

}  // namespace stcov
