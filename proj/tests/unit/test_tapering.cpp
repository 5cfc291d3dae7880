#include <stdexcept>
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "stcov/error.hpp"
#include "stcov/tapering.hpp"

using namespace stcov;

namespace {

SpaceTimePoints random_points(std::uint64_t seed, int n, int d, double spread) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, spread);
  SpaceTimePoints p{Eigen::MatrixXd(n, d), Eigen::MatrixXd(n, 1)};
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) p.x(i, c) = U(rng);
    p.t(i, 0) = U(rng);
  }
  return p;
}

const SpaceTimeKernel& base2() {
  static const SpaceTimeKernel k(2, Generator::exponential(0.5), TemporalStructure::pnorm_power(1, 2, 1, 1));
  return k;
}

}  // namespace

TEST_SUITE("tapering") {
  TEST_CASE("sparse storage") {
    Eigen::MatrixXd a(3, 3);
    a << 4, 0, 1, 0, 3, 0, 1, 0, 2;
    const auto s = SparseSymMatrix::from_dense(a);
    CHECK(s.nnz() == 5);
    CHECK(s.zero_fraction() == doctest::Approx(4.0 / 9));
    CHECK(s(0, 2) == 1.0);
    CHECK(s(1, 2) == 0.0);
    CHECK(s.to_dense() == a);
    Eigen::VectorXd x(3), y;
    x << 1, -2, 3;
    s.multiply(x, y);
    CHECK((y - a * x).norm() < 1e-15);
  }

  TEST_CASE("factorization check") {
    CHECK(chol_pd_check(Eigen::MatrixXd::Identity(4, 4)).verdict == PdCheck::Pass);
    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, 2, 1;
    CHECK(chol_pd_check(bad).verdict == PdCheck::Fail);
    CHECK(chol_pd_check(SparseSymMatrix::from_dense(bad)).verdict == PdCheck::Fail);
    Eigen::MatrixXd hollow(2, 2);
    hollow << 0, 1, 1, 0;
    CHECK(chol_pd_check(hollow).verdict == PdCheck::Fail);
    CHECK(chol_pd_check(Eigen::MatrixXd::Ones(3, 3)).verdict == PdCheck::Pass);
  }

  TEST_CASE("tapered Gneiting matrix on random points is positive definite") {
    const auto pts = random_points(7, 100, 2, 5.0);
    const auto A = taper_matrix(base2(), Taper::wendland(2, 1, 1.5, 2.0), pts);
    CHECK(chol_pd_check(A).verdict == PdCheck::Pass);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.to_dense(), Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(0) > -1e-10);
  }

  TEST_CASE("taper needs compact support") {
    const SpaceTimeKernel cm(2, Generator::exponential(), TemporalStructure::constant(1, 1.0));
    CHECK_THROWS_AS(Taper(cm, 1.0), std::invalid_argument);
  }

  TEST_CASE("taper wider than the configuration keeps every pair") {
    const auto pts = random_points(3, 30, 2, 1.0);
    const Taper tp = Taper::wendland(2, 1, 100.0, 100.0);
    const auto A = taper_matrix(base2(), tp, pts);
    CHECK(A.nnz() == 900);
    std::vector<double> dx(2), dt(1);
    for (int i = 0; i < 30; ++i) {
      for (int j = 0; j < 30; ++j) {
        for (int c = 0; c < 2; ++c) dx[c] = pts.x(i, c) - pts.x(j, c);
        dt[0] = pts.t(i, 0) - pts.t(j, 0);
        CHECK(A(i, j) == base2()(dx, dt) * tp(dx, dt));
      }
    }
  }

  TEST_CASE("distant points are not stored") {
    SpaceTimePoints p{Eigen::MatrixXd(2, 2), Eigen::MatrixXd::Zero(2, 1)};
    p.x << 0, 0, 5, 0;
    const auto A = taper_matrix(base2(), Taper::wendland(2, 1, 2.0, 1.0), p);
    CHECK(A.nnz() == 2);
    SpaceTimePoints q{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd(2, 1)};
    q.t << 0, 3;
    CHECK(taper_matrix(base2(), Taper::wendland(2, 1, 2.0, 1.0), q).nnz() == 2);
  }

  TEST_CASE("grid pattern matches brute-force pair enumeration") {
    const int m = 20;
    SpaceTimePoints p{Eigen::MatrixXd(m * m, 2), Eigen::MatrixXd::Zero(m * m, 1)};
    for (int i = 0; i < m * m; ++i) {
      p.x(i, 0) = i % m;
      p.x(i, 1) = i / m;
    }
    const Taper tp = Taper::wendland(2, 1, 1.5, 1.0);
    const auto A = taper_matrix(base2(), tp, p);
    std::size_t brute = 0;
    for (int i = 0; i < m * m; ++i) {
      for (int j = 0; j < m * m; ++j) {
        if (std::hypot(p.x(i, 0) - p.x(j, 0), p.x(i, 1) - p.x(j, 1)) < 1.5) ++brute;
      }
    }
    CHECK(A.nnz() == brute);
  }

  TEST_CASE("pattern follows the lag-dependent reach") {
    const auto pts = random_points(11, 150, 2, 4.0);
    const Taper tp = Taper::wendland(2, 1, 1.0, 1.5, 2.0);
    const auto A = taper_matrix(base2(), tp, pts);
    std::size_t brute = 0;
    for (int i = 0; i < 150; ++i) {
      for (int j = 0; j < 150; ++j) {
        const std::vector<double> dt{pts.t(i, 0) - pts.t(j, 0)};
        const double r = std::hypot(pts.x(i, 0) - pts.x(j, 0), pts.x(i, 1) - pts.x(j, 1));
        if (i == j || (std::abs(dt[0]) < tp.temporal_range() && r < tp.spatial_reach(dt))) ++brute;
      }
    }
    CHECK(A.nnz() == brute);
  }

  TEST_CASE("shrinking the taper never adds entries") {
    const auto pts = random_points(5, 200, 2, 6.0);
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (double r : {4.0, 3.0, 2.0, 1.5, 1.0, 0.5, 0.1}) {
      const auto n = taper_matrix(base2(), Taper::wendland(2, 1, r, r), pts).nnz();
      CHECK(n <= prev);
      prev = n;
    }
  }

  TEST_CASE("simulation") {
    const auto a = simulate_field(Eigen::MatrixXd::Identity(5, 5), 99);
    const auto b = simulate_field(Eigen::MatrixXd::Identity(5, 5), 99);
    CHECK(a == b);
    std::mt19937_64 rng(99);
    std::normal_distribution<double> N(0.0, 1.0);
    for (int i = 0; i < 5; ++i) CHECK(a(i) == N(rng));

    const Eigen::MatrixXd four = Eigen::MatrixXd::Constant(1, 1, 4.0);
    const auto z = simulate_fields(four, 1, 10000);
    const double var = z.squaredNorm() / 10000;
    CHECK(var == doctest::Approx(4.0).epsilon(0.1));

    Eigen::MatrixXd bad(2, 2);
    bad << 1, 2, 2, 1;
    CHECK_THROWS_AS(simulate_field(bad, 1), std::domain_error);
    CHECK_NOTHROW(simulate_field(Eigen::MatrixXd::Ones(3, 3), 1));
  }

  TEST_CASE("empirical moments of simulated fields") {
    const auto pts = random_points(21, 8, 2, 2.0);
    const Eigen::MatrixXd C = assemble_cov_matrix(base2(), pts);
    const int n = 10000;
    const Eigen::MatrixXd z = simulate_fields(C, 2, n);
    const Eigen::VectorXd mean = z.rowwise().mean();
    const Eigen::MatrixXd emp = z * z.transpose() / n;
    const double sigma = std::sqrt(base2().at_origin());
    for (int i = 0; i < 8; ++i) {
      CHECK(std::abs(mean(i)) <= 5 * sigma / std::sqrt(n));
      for (int j = 0; j < 8; ++j) CHECK(std::abs(emp(i, j) - C(i, j)) <= 5.0 / std::sqrt(n));
    }
  }

  TEST_CASE("kriging examples") {
    const SpaceTimeKernel k(2, Generator::exponential(), TemporalStructure::pnorm_power(1, 2, 2, 1));
    SpaceTimePoints obs{Eigen::MatrixXd(1, 2), Eigen::MatrixXd(1, 1)};
    obs.x << 0.2, 0.1;
    obs.t << 1.0;
    Eigen::VectorXd z(1);
    z << 1.7;
    SpaceTimePoints tg{Eigen::MatrixXd(2, 2), Eigen::MatrixXd(2, 1)};
    tg.x << 0.2, 0.1, 1.0, 0.1;
    tg.t << 1.0, 2.0;
    const auto r = krige(obs, z, tg, {k, std::nullopt});
    CHECK(r.predictions(0) == 1.7);
    const std::vector<double> dx{0.8, 0.0}, dt{1.0};
    CHECK(r.predictions(1) == doctest::Approx(1.7 * k(dx, dt) / k.at_origin()).epsilon(1e-12));
  }

  TEST_CASE("exact interpolation at observed locations") {
    const auto obs = random_points(8, 60, 2, 3.0);
    const Eigen::VectorXd z = simulate_field(assemble_cov_matrix(base2(), obs), 4);
    SpaceTimePoints tg{obs.x.topRows(5), obs.t.topRows(5)};
    const auto r = krige(obs, z, tg, {base2(), std::nullopt});
    for (int i = 0; i < 5; ++i) CHECK(r.predictions(i) == z(i));
  }

  TEST_CASE("iterative and dense solves of the same tapered system agree") {
    const auto obs = random_points(12, 300, 2, 4.0);
    const auto tg = random_points(13, 20, 2, 4.0);
    const Taper tp = Taper::wendland(2, 1, 8.0, 8.0);  // wider than the configuration
    const Eigen::VectorXd z = simulate_field(assemble_cov_matrix(base2(), obs), 6);
    const CovarianceSpec spec{base2(), tp};
    const auto dense = krige(obs, z, tg, spec, {KrigingMode::Exact});
    const auto sparse = krige(obs, z, tg, spec, {KrigingMode::Tapered});
    CHECK(sparse.residual <= 1e-8);
    CHECK(sparse.iterations > 0);
    CHECK(sparse.sparsity == 0.0);
    CHECK((dense.predictions - sparse.predictions).cwiseAbs().maxCoeff() < 1e-5 * z.cwiseAbs().maxCoeff());
  }

  TEST_CASE("tapered predictions approach the exact ones as the taper widens") {
    const auto obs = random_points(14, 200, 2, 6.0);
    const auto tg = random_points(15, 20, 2, 6.0);
    const Eigen::VectorXd z = simulate_field(assemble_cov_matrix(base2(), obs), 9);
    const auto exact = krige(obs, z, tg, {base2(), std::nullopt});
    double prev = std::numeric_limits<double>::infinity();
    for (double r : {2.0, 6.0, 20.0, 100.0, 1e3, 1e4, 1e6, 1e8}) {
      const auto t = krige(obs, z, tg, {base2(), Taper::wendland(2, 1, r, r)}, {KrigingMode::Tapered});
      const double dev = (t.predictions - exact.predictions).cwiseAbs().maxCoeff();
      CHECK(dev <= prev);
      prev = dev;
    }
    // The bias falls like 1 / range; at 1e8 only the solver tolerance is left.
    CHECK(prev < 1e-6);
  }

  TEST_CASE("solver failure carries the residual") {
    const auto obs = random_points(16, 100, 2, 2.0);
    const Eigen::VectorXd z = Eigen::VectorXd::Ones(100);
    KrigingOptions opt{KrigingMode::Tapered, 1e-12, 1};
    try {
      krige(obs, z, obs, {base2(), Taper::wendland(2, 1, 1.0, 1.0)}, opt);
      FAIL("expected a solver error");
    } catch (const SolverError& e) {
      CHECK(e.iterations() == 1);
      CHECK(e.residual() > 1e-12);
    }
  }
}
