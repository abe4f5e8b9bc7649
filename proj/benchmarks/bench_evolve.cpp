#include <benchmark/benchmark.h>

#include "nlselab/evolve.hpp"
#include "nlselab/field_gen.hpp"

using namespace nlselab;

static void BM_Rk4StepFractal(benchmark::State& state) {
  Grid1D grid = make_grid(16.0 * M_PI, static_cast<int>(state.range(0)));
  ModelSpec model;
  model.variant = Variant::fractal;
  model.beta = 0.1;
  WaveField psi = gaussian_bump(grid, 1.0, 0.5 * grid.length, 3.0, 0);
  const double dt = 0.5 * rk4_stability_limit(model, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_rk4(model, psi, dt));
  }
}
BENCHMARK(BM_Rk4StepFractal)->Arg(256)->Arg(1024);

static void BM_SplitStepCubic(benchmark::State& state) {
  Grid1D grid = make_grid(16.0 * M_PI, static_cast<int>(state.range(0)));
  ModelSpec model;
  model.variant = Variant::cubic_gp;
  model.g = -1.0;
  WaveField psi = gaussian_bump(grid, 1.0, 0.5 * grid.length, 3.0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_split(model, psi, 1e-3));
  }
}
BENCHMARK(BM_SplitStepCubic)->Arg(256)->Arg(1024);
