// Serial reference vs OpenMP kernels. Each pair runs the same input; the
// parallel variants take the thread count as the benchmark argument.

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "fadm/kernels.hpp"

using namespace fadm;

namespace {

RealGrid random_grid(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealGrid g(n, n);
  for (double& v : g.values) v = u(rng);
  return g;
}

constexpr int kSize = 1024;

template <bool Parallel>
void BM_PolarAverage(benchmark::State& state) {
  const RealGrid g = random_grid(kSize, 1);
  const kernels::PolarLattice lattice{kSize / 2, 360, 1.0 / kSize, true};
  std::vector<double> out(kSize / 2);
  if constexpr (Parallel) kernels::set_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::polar_average(g, lattice, out);
    } else {
      kernels::serial::polar_average(g, lattice, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_MultiplyGain(benchmark::State& state) {
  const RealGrid gain = random_grid(kSize, 2);
  std::vector<std::complex<double>> bins(gain.values.size(), {1.0, 0.5});
  if constexpr (Parallel) kernels::set_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::multiply_gain(bins, gain.values);
    } else {
      kernels::serial::multiply_gain(bins, gain.values);
    }
    benchmark::DoNotOptimize(bins.data());
  }
}

template <bool Parallel>
void BM_BilinearSample(benchmark::State& state) {
  const RealGrid src = random_grid(kSize, 3);
  const kernels::Axis ax{0.25, 0.61, kSize * 3 / 2};
  std::vector<double> out(static_cast<std::size_t>(ax.count) * ax.count);
  if constexpr (Parallel) kernels::set_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::bilinear_sample(src, ax, ax, out);
    } else {
      kernels::serial::bilinear_sample(src, ax, ax, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_CubicSample(benchmark::State& state) {
  const RealGrid src = random_grid(kSize / 2, 4);
  const kernels::Axis ax{0.1, 0.5 * 1.2807, kSize};
  std::vector<double> out(static_cast<std::size_t>(ax.count) * ax.count);
  if constexpr (Parallel) kernels::set_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::cubic_sample(src.values, src.width, src.height, ax, ax, out);
    } else {
      kernels::serial::cubic_sample(src.values, src.width, src.height, ax, ax, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_SsimMean(benchmark::State& state) {
  const RealGrid a = random_grid(kSize, 5);
  const RealGrid b = random_grid(kSize, 6);
  if constexpr (Parallel) kernels::set_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    double s;
    if constexpr (Parallel) {
      s = kernels::ssim_mean(a.values, b.values, kSize, kSize);
    } else {
      s = kernels::serial::ssim_mean(a.values, b.values, kSize, kSize);
    }
    benchmark::DoNotOptimize(s);
  }
}

void thread_args(benchmark::internal::Benchmark* b) {
  for (int t = 1; t <= kernels::max_threads(); t *= 2) b->Arg(t);
  b->UseRealTime()->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_PolarAverage<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PolarAverage<true>)->Apply(thread_args);
BENCHMARK(BM_MultiplyGain<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultiplyGain<true>)->Apply(thread_args);
BENCHMARK(BM_BilinearSample<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BilinearSample<true>)->Apply(thread_args);
BENCHMARK(BM_CubicSample<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CubicSample<true>)->Apply(thread_args);
BENCHMARK(BM_SsimMean<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SsimMean<true>)->Apply(thread_args);

BENCHMARK_MAIN();
