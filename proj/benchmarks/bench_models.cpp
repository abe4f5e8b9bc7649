#include <benchmark/benchmark.h>

#include "nlselab/field_gen.hpp"
#include "nlselab/model.hpp"

using namespace nlselab;

namespace {

ModelSpec make_model(int which) {
  ModelSpec m;
  switch (which) {
    case 0: m.variant = Variant::linear; break;
    case 1: m.variant = Variant::log_birula; m.b = 0.1; break;
    case 2: m.variant = Variant::kinematic; m.a = 0.5; break;
    case 3: m.variant = Variant::fractal; m.beta = 0.1; break;
    case 4: m.variant = Variant::cubic_gp; m.g = 1.0; break;
    default: m.variant = Variant::nabla2log; m.hbar_second = 2.0; break;
  }
  return m;
}

}  // namespace

static void BM_TimeDerivative(benchmark::State& state) {
  Grid1D grid = make_grid(16.0 * M_PI, 256);
  WaveField psi = random_nodefree(grid, 8, 3);
  ModelSpec model = make_model(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(time_derivative(model, psi));
  }
}
BENCHMARK(BM_TimeDerivative)->DenseRange(0, 5);

static void BM_HamiltonianDensity(benchmark::State& state) {
  Grid1D grid = make_grid(16.0 * M_PI, 256);
  WaveField psi = random_nodefree(grid, 8, 3);
  ModelSpec model = make_model(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hamiltonian_density(model, psi));
  }
}
BENCHMARK(BM_HamiltonianDensity)->Arg(1)->Arg(3);
