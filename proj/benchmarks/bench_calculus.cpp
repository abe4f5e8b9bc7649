#include <benchmark/benchmark.h>

#include "nlselab/calculus.hpp"
#include "nlselab/field_gen.hpp"

using namespace nlselab;

static void BM_SpectralGradient(benchmark::State& state) {
  Grid1D grid = make_grid(16.0 * M_PI, static_cast<int>(state.range(0)));
  WaveField f = random_bandlimited(grid, grid.n / 8, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradient(f, Scheme::spectral));
  }
}
BENCHMARK(BM_SpectralGradient)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_Central2Gradient(benchmark::State& state) {
  Grid1D grid = make_grid(16.0 * M_PI, static_cast<int>(state.range(0)));
  WaveField f = random_bandlimited(grid, grid.n / 8, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradient(f, Scheme::central2));
  }
}
BENCHMARK(BM_Central2Gradient)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_LogGradient(benchmark::State& state) {
  Grid1D grid = make_grid(16.0 * M_PI, static_cast<int>(state.range(0)));
  WaveField f = random_nodefree(grid, grid.n / 16, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_gradient(f));
  }
}
BENCHMARK(BM_LogGradient)->Arg(256)->Arg(1024);
