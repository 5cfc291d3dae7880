#include <benchmark/benchmark.h>

#include <vector>

#include "stcov/spectral.hpp"
#include "stcov/transforms.hpp"

using namespace stcov;

namespace {

void BM_HankelCurve(benchmark::State& state) {
  const auto gen = Generator::powered_exponential(0.5);
  const auto grid = uniform_grid(20.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hankel_gn(gen, 3, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HankelCurve)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_HankelOscillatory(benchmark::State& state) {
  const auto gen = Generator::triangle();
  const double s = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hankel_gn_at(gen, 2, s));
}
BENCHMARK(BM_HankelOscillatory)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_FourierTensor(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto gen = Generator::exponential();
  const auto rho = HomogeneousNorm::lp(1.0);
  const std::vector<double> v(static_cast<std::size_t>(n), 1.0);
  TransformOptions opt;
  opt.precision = Precision::Double;
  for (auto _ : state) benchmark::DoNotOptimize(fourier_Gn(gen, rho, n, v, 1.0, opt));
}
BENCHMARK(BM_FourierTensor)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace
