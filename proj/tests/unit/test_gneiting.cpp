#include <stdexcept>
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "stcov/gneiting.hpp"

using namespace stcov;

namespace {

double min_eig(const Eigen::MatrixXd& C) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
  if (es.info() == Eigen::Success) return es.eigenvalues()(0);
  return Eigen::EigenSolver<Eigen::MatrixXd>(C, false).eigenvalues().real().minCoeff();
}

SpaceTimePoints random_points(std::mt19937_64& rng, int n, int d, int l, double spread) {
  std::uniform_real_distribution<double> U(-spread, spread);
  SpaceTimePoints p{Eigen::MatrixXd(n, d), Eigen::MatrixXd(n, l)};
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) p.x(i, c) = U(rng);
    for (int c = 0; c < l; ++c) p.t(i, c) = U(rng);
  }
  return p;
}

}  // namespace

TEST_SUITE("gneiting") {
  TEST_CASE("evaluation") {
    const SpaceTimeKernel k(2, Generator::exponential(), TemporalStructure::pnorm_power(1, 2, 2, 1));
    const std::vector<double> x{1.0, 0.0}, t{1.0}, x0{0.0, 0.0}, t0{0.0};
    CHECK(k(x, t) == doctest::Approx(0.3032653).epsilon(1e-7));
    CHECK(k(x0, t0) == 1.0);
    CHECK(k.at_origin() == 1.0);

    const SpaceTimeKernel tri(1, Generator::triangle(), TemporalStructure::constant(1, 1.0));
    const std::vector<double> x2{2.0};
    CHECK(tri(x2, t0) == 0.0);

    const SpaceTimeKernel k3(3, Generator::spherical(2.0), TemporalStructure::pnorm_power(1, 2, 1, 4));
    CHECK(k3(std::vector<double>{0, 0, 0}, t0) == doctest::Approx(std::pow(4.0, -1.5)));
    // Support widens to radius * sqrt(h(t)).
    CHECK(k3.spatial_support(std::vector<double>{5.0}) == doctest::Approx(6.0));
    CHECK(k3(std::vector<double>{5.9, 0, 0}, std::vector<double>{5.0}) > 0.0);
    CHECK(k3(std::vector<double>{6.0, 0, 0}, std::vector<double>{5.0}) == 0.0);
  }

  TEST_CASE("symmetry and separability") {
    const SpaceTimeKernel k(2, Generator::powered_exponential(0.5), TemporalStructure::pnorm_power(2, 1.0, 0.8, 0.5),
                            HomogeneousNorm::lp(1.0));
    const std::vector<double> x{0.3, -1.2}, mx{-0.3, 1.2}, t{0.7, -0.1}, mt{-0.7, 0.1};
    CHECK(k(x, t) == k(mx, mt));
    const double c = 2.5;
    const SpaceTimeKernel sep(2, Generator::exponential(), TemporalStructure::constant(1, c));
    for (double tt : {0.0, 1.0, 10.0}) {
      const std::vector<double> tv{tt}, xv{1.0, 1.0};
      CHECK(sep(xv, tv) == doctest::Approx(std::exp(-2.0 / c) / c));
    }
  }

  TEST_CASE("matrix assembly") {
    const SpaceTimeKernel k(2, Generator::exponential(), TemporalStructure::pnorm_power(1, 2, 1, 1));
    SpaceTimePoints one{Eigen::MatrixXd::Zero(1, 2), Eigen::MatrixXd::Zero(1, 1)};
    const auto C1 = assemble_cov_matrix(k, one);
    CHECK(C1.rows() == 1);
    CHECK(C1(0, 0) == k.at_origin());

    SpaceTimePoints two{Eigen::MatrixXd::Ones(2, 2), Eigen::MatrixXd::Ones(2, 1)};
    const auto C2 = assemble_cov_matrix(k, two);
    CHECK(C2(0, 1) == C2(0, 0));
    CHECK(std::abs(C2.determinant()) < 1e-15);

    SpaceTimePoints line{Eigen::MatrixXd(3, 2), Eigen::MatrixXd(3, 1)};
    line.x << 0, 0, 0.5, 0.5, 1, 1;
    line.t << 0, 0.5, 1;
    CHECK(min_eig(assemble_cov_matrix(k, line)) >= 0.0);

    SpaceTimePoints bad{Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Zero(2, 1)};
    CHECK_THROWS_AS(assemble_cov_matrix(k, bad), std::invalid_argument);
  }

  TEST_CASE("valid kernels give positive semidefinite matrices") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size(2, 50);
    const std::vector<Generator> gens{Generator::exponential(), Generator::powered_exponential(0.6),
                                      Generator::generalized_cauchy(0.8, 1.5)};
    for (int trial = 0; trial < 100; ++trial) {
      const int d = 1 + trial % 3, l = 1 + (trial / 3) % 2;
      const TemporalStructure h = trial % 2 ? TemporalStructure::pnorm_power(l, 2, 1.0 + 0.01 * (trial % 50), 0.5)
                                            : TemporalStructure::bernstein(l, BernsteinKind::Power, 0.5, 0.9);
      const SpaceTimeKernel k(d, gens[trial % 3], h);
      const auto C = assemble_cov_matrix(k, random_points(rng, size(rng), d, l, 2.0));
      CAPTURE(trial);
      CHECK(min_eig(C) >= -1e-8 * k.at_origin());
    }
  }

  TEST_CASE("triangle generator in three dimensions admits an indefinite matrix") {
    const SpaceTimeKernel k(3, Generator::triangle(), TemporalStructure::pnorm_power(1, 2, 1, 1));
    double worst = 0.0;
    for (int m = 3; m <= 5 && worst >= -1e-8; ++m) {
      for (double spacing = 0.2; spacing <= 0.6; spacing += 0.05) {
        const int n = m * m * m;
        SpaceTimePoints p{Eigen::MatrixXd(n, 3), Eigen::MatrixXd::Zero(n, 1)};
        for (int i = 0; i < n; ++i) {
          p.x(i, 0) = spacing * (i % m);
          p.x(i, 1) = spacing * ((i / m) % m);
          p.x(i, 2) = spacing * (i / (m * m));
        }
        worst = std::min(worst, min_eig(assemble_cov_matrix(k, p)));
      }
    }
    CHECK(worst < -1e-8 * k.at_origin());
  }

  TEST_CASE("multivariate product class") {
    const MultivariateKernel::Factor f1{2, TemporalStructure::pnorm_power(1, 2, 2, 1)};
    const MultivariateKernel::Factor f2{1, TemporalStructure::bernstein(1, BernsteinKind::Power, 0.5, 0.5)};
    const Generator g1 = Generator::exponential(), g2 = Generator::generalized_cauchy(0.5, 2.0);
    const auto M = MultivariateKernel::product({f1, f2}, {g1, g2});
    const std::vector<std::vector<double>> xs{{1.0, 0.0}, {0.4}}, ts{{1.0}, {2.0}};
    const SpaceTimeKernel k1(2, g1, f1.h), k2(1, g2, f2.h);
    CHECK(M(xs, ts) == doctest::Approx(k1(xs[0], ts[0]) * k2(xs[1], ts[1])));

    const auto swapped = MultivariateKernel::product({f2, f1}, {g2, g1});
    CHECK(swapped({xs[1], xs[0]}, {ts[1], ts[0]}) == doctest::Approx(M(xs, ts)));

    const std::vector<std::vector<double>> zx{{0.0, 0.0}, {0.0}}, zt{{0.0}, {0.0}};
    CHECK(M(zx, zt) == doctest::Approx(std::pow(f1.h.at_origin(), -1.0) * std::pow(f2.h.at_origin(), -0.5)));

    const auto single = MultivariateKernel::product({f1}, {g1});
    CHECK(single({xs[0]}, {ts[0]}) == k1(xs[0], ts[0]));

    const MultivariateKernel mix({f1, f2}, {{0.3, {g1, g2}}, {0.7, {Generator::exponential(2.0), g2}}});
    const SpaceTimeKernel k1b(2, Generator::exponential(2.0), f1.h);
    CHECK(mix(xs, ts) == doctest::Approx(0.3 * k1(xs[0], ts[0]) * k2(xs[1], ts[1]) +
                                         0.7 * k1b(xs[0], ts[0]) * k2(xs[1], ts[1])));

    CHECK_THROWS_AS(M({xs[0]}, ts), std::invalid_argument);
    CHECK_THROWS_AS(MultivariateKernel::product({f1, f2}, {g1, Generator::triangle()}), std::invalid_argument);
  }
}
