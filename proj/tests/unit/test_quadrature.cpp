#include <stdexcept>
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stcov/error.hpp"
#include "stcov/quadrature.hpp"

using namespace stcov;

TEST_SUITE("quadrature") {
  TEST_CASE("kronrod weights integrate constants") {
    for (int pts : {15, 21, 31, 41, 51, 61}) {
      const auto& rule = kronrod_rule<long double>(pts);
      long double sum = 0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += (rule.nodes[i] == 0 ? 1 : 2) * rule.kronrod[i];
      CHECK(std::abs(static_cast<double>(sum) - 2.0) < 1e-15);
    }
  }

  TEST_CASE("smooth and endpoint-singular integrands") {
    const auto s = integrate<double>([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(std::abs(s.value - 2.0) < 1e-12);
    CHECK(s.error < 1e-9);

    const auto r = integrate<double>([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(std::abs(r.value - 2.0) < 1e-8);

    const auto e = integrate<long double>([](long double x) { return std::exp(x); }, 0.0L, 1.0L);
    CHECK(std::abs(static_cast<double>(e.value - (std::exp(1.0L) - 1.0L))) < 1e-16);
  }

  TEST_CASE("reported error bounds the true error") {
    QuadratureOptions opt;
    opt.rel_tol = 1e-6;
    const auto s = integrate<double>([](double x) { return std::cos(20 * x) * std::exp(-x); }, 0.0, 3.0, opt);
    const double exact = (1.0 - std::exp(-3.0) * (std::cos(60.0) - 20 * std::sin(60.0))) / 401.0;
    CHECK(std::abs(s.value - exact) <= s.error + 1e-15);
  }

  TEST_CASE("radial cutoff") {
    const auto c = find_radial_cutoff([](double u) { return std::exp(-u * u) * u; }, 1.0, 1e-14, TailRule::PointwisePeak);
    CHECK(c.reached);
    CHECK(std::exp(-c.radius * c.radius) * c.radius < 1e-13);
    CHECK_THROWS_AS(find_radial_cutoff([](double u) { return 1.0 / (1.0 + u); }, 1.0, 1e-14, TailRule::TailMass),
                    NonConvergenceError);
  }
}
