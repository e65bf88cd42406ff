#include <lpuhf/matalg.hpp>
#include <lpuhf/simsys.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace lpuhf;

namespace {

CMatrix gaussian(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

void BM_OpnormGeneral(benchmark::State& state) {
  const CMatrix a = gaussian(state.range(0), 1);
  const double p = static_cast<double>(state.range(1)) / 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(opnorm(a, p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OpnormGeneral)->ArgsProduct({{4, 16, 64}, {3, 6}});

void BM_OpnormTwo(benchmark::State& state) {
  const CMatrix a = gaussian(state.range(0), 2);
  for (auto _ : state) benchmark::DoNotOptimize(opnorm(a, 2.0));
}
BENCHMARK(BM_OpnormTwo)->Arg(4)->Arg(16)->Arg(64);

void BM_BoydSingleStart(benchmark::State& state) {
  const CMatrix a = gaussian(state.range(0), 3);
  BoydOptions opts;
  opts.restarts = 0;
  opts.screen = 0;
  for (auto _ : state) benchmark::DoNotOptimize(boyd_lower_bound(a, 3.0, opts));
}
BENCHMARK(BM_BoydSingleStart)->Arg(4)->Arg(16)->Arg(64);

void BM_InterpolationUpper(benchmark::State& state) {
  const CMatrix a = gaussian(state.range(0), 4);
  for (auto _ : state) benchmark::DoNotOptimize(interpolation_upper_bound(a, 3.0));
}
BENCHMARK(BM_InterpolationUpper)->Arg(4)->Arg(16)->Arg(64);

void BM_FlipNorm(benchmark::State& state) {
  const Mat y = flip_mat(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(opnorm(y, 3.0));
}
BENCHMARK(BM_FlipNorm)->Arg(2)->Arg(8)->Arg(32);

void BM_KGammaNorm(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const CMatrix x = gaussian(state.range(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(k_gamma_norm(d, 10.0, x, 2.0));
}
BENCHMARK(BM_KGammaNorm)->Arg(2)->Arg(3)->Arg(4);

void BM_PBoundTensor(benchmark::State& state) {
  const auto a = gamma_corner_system(2, 4.0);
  const auto b = gamma_corner_system(static_cast<std::size_t>(state.range(0)), 9.0);
  for (auto _ : state) benchmark::DoNotOptimize(p_bound(tensor_systems(a, b), 3.0));
}
BENCHMARK(BM_PBoundTensor)->Arg(2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
