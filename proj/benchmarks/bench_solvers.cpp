#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fracwave/fracops.hpp"
#include "fracwave/metrics.hpp"
#include "fracwave/scheme.hpp"
#include "fracwave/solver.hpp"
#include "fracwave/toeplitz.hpp"

namespace {

using namespace fracwave;

DiscreteSystem make_system(std::size_t J, std::size_t N) {
  return assemble_system(example1(1.5), TemporalGrid::uniform(J), SpatialMesh::uniform(N));
}

void BM_SolveStepping(benchmark::State& state) {
  const auto sys = make_system(static_cast<std::size_t>(state.range(0)), 63);
  for (auto _ : state) benchmark::DoNotOptimize(solve_stepping(sys));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveStepping)->RangeMultiplier(2)->Range(256, 4096)->Complexity()->Unit(benchmark::kMillisecond);

void BM_SolveFastDnc(benchmark::State& state) {
  const auto sys = make_system(static_cast<std::size_t>(state.range(0)), 63);
  for (auto _ : state) benchmark::DoNotOptimize(solve_fast_dnc(sys));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveFastDnc)->RangeMultiplier(2)->Range(256, 16384)->Complexity()->Unit(benchmark::kMillisecond);

void BM_ToeplitzFft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  constexpr std::size_t width = 63;
  const KernelWeights k = rl_cell_average_weights(0.5, 1.0 / static_cast<double>(n), n);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  std::vector<double> x(n * width), y(n * width);
  for (auto& v : x) v = nd(rng);
  const ToeplitzPlan plan(k.view(), n, width);
  for (auto _ : state) {
    plan.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ToeplitzFft)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMicrosecond);

void BM_ToeplitzDirect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  constexpr std::size_t width = 63;
  const KernelWeights k = rl_cell_average_weights(0.5, 1.0 / static_cast<double>(n), n);
  std::vector<double> x(n * width, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(toeplitz_matvec_direct(k.view(), x, width));
}
BENCHMARK(BM_ToeplitzDirect)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMicrosecond);

void BM_MittagLeffler(benchmark::State& state) {
  const double z = -static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mittag_leffler({1.5, 1.51}, z));
}
BENCHMARK(BM_MittagLeffler)->Arg(1)->Arg(50)->Arg(1000)->Arg(1000000);

void BM_FracSeminorm(benchmark::State& state) {
  const auto J = static_cast<std::size_t>(state.range(0));
  constexpr std::size_t width = 63;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  std::vector<double> w(J * width);
  for (auto& v : w) v = nd(rng);
  const TridiagonalOperator mass = assemble_mass(SpatialMesh::uniform(width));
  const double tau = 1.0 / static_cast<double>(J);
  for (auto _ : state) benchmark::DoNotOptimize(frac_seminorm(w, width, 0.25, tau, mass));
}
BENCHMARK(BM_FracSeminorm)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
