#include <benchmark/benchmark.h>

#include <random>

#include "stcov/sparse.hpp"
#include "stcov/tapering.hpp"

using namespace stcov;

namespace {

SpaceTimePoints cloud(int n, double side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, side);
  SpaceTimePoints p;
  p.x.resize(n, 2);
  p.t.resize(n, 1);
  for (int i = 0; i < n; ++i) {
    p.x(i, 0) = u(rng);
    p.x(i, 1) = u(rng);
    p.t(i, 0) = u(rng);
  }
  return p;
}

SpaceTimeKernel base() {
  return SpaceTimeKernel(2, Generator::exponential(), TemporalStructure::pnorm_power(1, 2, 1, 1));
}

void BM_TaperMatrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto pts = cloud(n, 10.0, 1);
  const Taper taper = Taper::wendland(2, 1, 1.5, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(taper_matrix(base(), taper, pts));
}
BENCHMARK(BM_TaperMatrix)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

void BM_CholPdCheck(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto c = assemble_cov_matrix(base(), cloud(n, 10.0, 2));
  for (auto _ : state) benchmark::DoNotOptimize(chol_pd_check(c));
}
BENCHMARK(BM_CholPdCheck)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond);

void BM_Krige(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto mode = state.range(1) ? KrigingMode::Tapered : KrigingMode::Exact;
  const auto obs = cloud(n, 10.0, 3);
  const auto targets = cloud(20, 10.0, 4);
  const Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
  const CovarianceSpec spec{base(), Taper::wendland(2, 1, 1.5, 1.5)};
  for (auto _ : state) benchmark::DoNotOptimize(krige(obs, z, targets, spec, {mode}));
}
BENCHMARK(BM_Krige)->ArgsProduct({{500, 1000, 2000}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace
