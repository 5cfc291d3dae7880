#include "stcov/tapering.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "stcov/error.hpp"

namespace stcov {

namespace {

double wendland_time(double r) {
  if (r >= 1.0) return 0.0;
  const double s = 1.0 - r;
  return s * s * s * s * (1.0 + 4.0 * r);
}

double euclid(std::span<const double> t) {
  double s = 0.0;
  for (double v : t) s += v * v;
  return std::sqrt(s);
}

void check_points(const SpaceTimePoints& pts, int d, int l, const char* what) {
  if (pts.x.cols() != d || pts.t.cols() != l || pts.t.rows() != pts.x.rows()) {
    throw std::invalid_argument(std::string(what) + ": point dimensions do not match the kernel");
  }
}

// Lower factor with unit diagonal stored below the diagonal, pivots in d.
void ldlt_clamped(const Eigen::MatrixXd& cov, Eigen::MatrixXd& L, Eigen::VectorXd& d) {
  const Eigen::Index n = cov.rows();
  if (cov.cols() != n) throw std::invalid_argument("simulate_field: covariance must be square");
  L = Eigen::MatrixXd::Identity(n, n);
  d.resize(n);
  if (n == 0) return;
  const double tol = 1e-10 * cov.diagonal().cwiseAbs().maxCoeff();
  Eigen::MatrixXd a = cov;
  for (Eigen::Index k = 0; k < n; ++k) {
    double pivot = a(k, k);
    if (pivot < -tol) throw std::domain_error("simulate_field: covariance is not positive semidefinite");
    if (pivot <= tol) {
      d(k) = 0.0;
      continue;
    }
    d(k) = pivot;
    const Eigen::Index m = n - k - 1;
    if (m == 0) break;
    L.col(k).tail(m) = a.col(k).tail(m) / pivot;
    a.bottomRightCorner(m, m).template triangularView<Eigen::Lower>() -=
        pivot * L.col(k).tail(m) * L.col(k).tail(m).transpose();
  }
}

// Index of an observation equal to target row i, or -1.
Eigen::Index coincident(const SpaceTimePoints& obs, const SpaceTimePoints& targets, Eigen::Index i) {
  for (Eigen::Index j = 0; j < obs.size(); ++j) {
    if (obs.x.row(j) == targets.x.row(i) && obs.t.row(j) == targets.t.row(i)) return j;
  }
  return -1;
}

}  // namespace

Taper::Taper(SpaceTimeKernel kernel, double temporal_range)
    : kernel_(std::move(kernel)), temporal_range_(temporal_range), origin_(kernel_.at_origin()) {
  if (!kernel_.generator().is_compact()) throw std::invalid_argument("taper generator must have compact support");
  if (!(temporal_range > 0.0)) throw std::invalid_argument("taper temporal range must be positive");
}

Taper Taper::wendland(int d, int l, double spatial_range, double temporal_range, double coupling,
                      HomogeneousNorm rho) {
  if (!(spatial_range > 0.0) || !std::isfinite(spatial_range)) {
    throw std::invalid_argument("taper spatial range must be positive and finite");
  }
  if (!(coupling >= 0.0)) throw std::invalid_argument("taper coupling must be nonnegative");
  const double mu = std::floor(d / 2.0) + 2.0;
  const Generator gen = Generator::askey_wendland(mu, 1, spatial_range);
  const TemporalStructure h = coupling > 0.0
                                  ? TemporalStructure::pnorm_power(l, 2.0, 1.0, temporal_range / coupling)
                                  : TemporalStructure::constant(l, 1.0);
  // pnorm_power gives ||t|| + tau/coupling; rescale the generator so that the
  // reach at lag zero stays spatial_range.
  const double h0 = h.at_origin();
  return {SpaceTimeKernel(d, gen.with_support_radius(spatial_range / std::sqrt(h0)), h, rho), temporal_range};
}

double Taper::spatial_range() const {
  const std::vector<double> zero(static_cast<std::size_t>(kernel_.l()), 0.0);
  return kernel_.spatial_support(zero);
}

double Taper::spatial_reach(std::span<const double> t) const {
  if (euclid(t) >= temporal_range_) return 0.0;
  return kernel_.spatial_support(t);
}

double Taper::operator()(std::span<const double> x, std::span<const double> t) const {
  const double w = wendland_time(euclid(t) / temporal_range_);
  if (w == 0.0) return 0.0;
  return kernel_(x, t) / origin_ * w;
}

SparseSymMatrix taper_matrix(const SpaceTimeKernel& base, const Taper& taper, const SpaceTimePoints& pts) {
  const int d = base.d();
  const int l = base.l();
  if (taper.kernel().d() != d || taper.kernel().l() != l) {
    throw std::invalid_argument("taper_matrix: base and taper dimensions differ");
  }
  check_points(pts, d, l, "taper_matrix");
  const int n = static_cast<int>(pts.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return pts.t(a, 0) < pts.t(b, 0); });

  std::vector<std::vector<SparseSymMatrix::Entry>> rows(static_cast<std::size_t>(n));
  std::vector<double> dx(static_cast<std::size_t>(d)), dt(static_cast<std::size_t>(l));
  const double tau = taper.temporal_range();
  for (int a = 0; a < n; ++a) {
    const int i = order[a];
    std::vector<double> zx(static_cast<std::size_t>(d), 0.0), zt(static_cast<std::size_t>(l), 0.0);
    rows[i].push_back({i, base(zx, zt) * taper(zx, zt)});
    for (int b = a + 1; b < n; ++b) {
      const int j = order[b];
      if (pts.t(j, 0) - pts.t(i, 0) >= tau) break;
      for (int c = 0; c < d; ++c) dx[c] = pts.x(i, c) - pts.x(j, c);
      for (int c = 0; c < l; ++c) dt[c] = pts.t(i, c) - pts.t(j, c);
      const double w = taper(dx, dt);
      if (w == 0.0) continue;
      const double v = base(dx, dt) * w;
      if (v == 0.0) continue;
      rows[i].push_back({j, v});
      rows[j].push_back({i, v});
    }
  }
  return SparseSymMatrix::from_rows(n, std::move(rows));
}

Eigen::MatrixXd simulate_fields(const Eigen::MatrixXd& cov, std::uint64_t seed, int count) {
  if (count < 0) throw std::invalid_argument("simulate_fields: negative replicate count");
  Eigen::MatrixXd L;
  Eigen::VectorXd d;
  ldlt_clamped(cov, L, d);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index n = cov.rows();
  Eigen::MatrixXd z(n, count);
  for (int c = 0; c < count; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) z(i, c) = normal(rng);
  }
  const Eigen::VectorXd sd = d.cwiseSqrt();
  return L.triangularView<Eigen::UnitLower>() * (sd.asDiagonal() * z);
}

Eigen::VectorXd simulate_field(const Eigen::MatrixXd& cov, std::uint64_t seed) {
  return simulate_fields(cov, seed, 1).col(0);
}

std::string to_string(KrigingMode m) { return m == KrigingMode::Exact ? "exact" : "tapered"; }

KrigingResult krige(const SpaceTimePoints& obs, const Eigen::VectorXd& z, const SpaceTimePoints& targets,
                    const CovarianceSpec& spec, const KrigingOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const SpaceTimeKernel& base = spec.base;
  check_points(obs, base.d(), base.l(), "krige");
  check_points(targets, base.d(), base.l(), "krige");
  const Eigen::Index n = obs.size();
  if (n < 1) throw std::invalid_argument("krige: no observations");
  if (z.size() != n) throw std::invalid_argument("krige: observation count differs from value count");
  if (opt.mode == KrigingMode::Tapered && !spec.taper) throw std::invalid_argument("krige: tapered mode needs a taper");

  auto cross = [&](const double* dx, const double* dt) {
    std::span<const double> sx(dx, static_cast<std::size_t>(base.d()));
    std::span<const double> st(dt, static_cast<std::size_t>(base.l()));
    double v = base(sx, st);
    if (spec.taper && v != 0.0) v *= (*spec.taper)(sx, st);
    return v;
  };

  KrigingResult res;
  res.mode = opt.mode;
  Eigen::VectorXd w;
  const double dn = static_cast<double>(n);
  if (opt.mode == KrigingMode::Exact) {
    Eigen::MatrixXd C(n, n);
    std::vector<double> dx(static_cast<std::size_t>(base.d())), dt(static_cast<std::size_t>(base.l()));
    Eigen::Index zeros = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) {
        for (int c = 0; c < base.d(); ++c) dx[c] = obs.x(i, c) - obs.x(j, c);
        for (int c = 0; c < base.l(); ++c) dt[c] = obs.t(i, c) - obs.t(j, c);
        C(i, j) = C(j, i) = cross(dx.data(), dt.data());
        if (C(i, j) == 0.0) zeros += (i == j) ? 1 : 2;
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(C);
    if (llt.info() != Eigen::Success) throw SolverError("krige: covariance matrix is not positive definite", NAN, 0);
    w = llt.solve(z);
    res.residual = (C * w - z).norm() / std::max(z.norm(), 1e-300);
    res.entries_touched = dn * dn * dn / 6.0 + dn * dn;
    res.sparsity = static_cast<double>(zeros) / (dn * dn);
  } else {
    const SparseSymMatrix A = taper_matrix(base, *spec.taper, obs);
    const int cap = opt.max_iter > 0 ? opt.max_iter : static_cast<int>(10 * n);
    const Eigen::VectorXd dinv = A.diagonal().cwiseInverse();
    const double bnorm = z.norm();
    w = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd r = z, p, q;
    double rel = bnorm > 0.0 ? 1.0 : 0.0;
    int it = 0;
    if (bnorm > 0.0) {
      Eigen::VectorXd s = dinv.cwiseProduct(r);
      p = s;
      double rs = r.dot(s);
      while (it < cap) {
        A.multiply(p, q);
        const double pq = p.dot(q);
        if (!(pq > 0.0)) throw SolverError("krige: tapered matrix is not positive definite", rel, it);
        const double alpha = rs / pq;
        w += alpha * p;
        r -= alpha * q;
        ++it;
        rel = r.norm() / bnorm;
        if (rel <= opt.tol) break;
        s = dinv.cwiseProduct(r);
        const double rs_new = r.dot(s);
        p = s + (rs_new / rs) * p;
        rs = rs_new;
      }
      if (rel > opt.tol) throw SolverError("krige: conjugate gradients did not reach the tolerance", rel, it);
    }
    res.iterations = it;
    res.residual = rel;
    res.entries_touched = static_cast<double>(it + 1) * static_cast<double>(A.nnz());
    res.sparsity = A.zero_fraction();
  }

  const Eigen::Index m = targets.size();
  res.predictions.resize(m);
  std::vector<double> dx(static_cast<std::size_t>(base.d())), dt(static_cast<std::size_t>(base.l()));
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index hit = coincident(obs, targets, i);
    if (hit >= 0) {
      res.predictions(i) = z(hit);
      continue;
    }
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (int c = 0; c < base.d(); ++c) dx[c] = targets.x(i, c) - obs.x(j, c);
      for (int c = 0; c < base.l(); ++c) dt[c] = targets.t(i, c) - obs.t(j, c);
      const double v = cross(dx.data(), dt.data());
      if (v != 0.0) s += v * w(j);
    }
    res.predictions(i) = s;
  }
  res.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace stcov
