#include "nlselab/field_gen.hpp"

#include <cmath>

#include "nlselab/errors.hpp"
#include "nlselab/fractal_motion.hpp"

namespace nlselab {

namespace {
constexpr Complex kImag{0.0, 1.0};
}

WaveField random_bandlimited(const Grid1D& grid, int q_max, uint64_t seed) {
  if (q_max < 0 || 2 * q_max >= grid.n) {
    throw InvalidArgumentError("random_bandlimited: q_max outside the admissible band");
  }
  GaussianSampler rng(seed);
  WaveField f(grid);
  for (int q = -q_max; q <= q_max; ++q) {
    const Complex coeff{rng.next(), rng.next()};
    const double k = grid.wavenumber(q);
    for (int j = 0; j < grid.n; ++j) {
      f[j] += coeff * std::exp(kImag * k * grid.x(j));
    }
  }
  const double scale = 1.0 / std::sqrt(2.0 * q_max + 1.0);
  for (int j = 0; j < grid.n; ++j) f[j] *= scale;
  return f;
}

WaveField random_nodefree(const Grid1D& grid, int q_max, uint64_t seed, double amp) {
  WaveField u = random_bandlimited(grid, q_max, seed);
  WaveField v = random_bandlimited(grid, q_max, seed ^ 0xdeadbeefcafef00dull);
  WaveField f(grid);
  for (int j = 0; j < grid.n; ++j) {
    f[j] = std::exp(Complex{amp * u[j].real(), amp * v[j].real()});
  }
  return f;
}

WaveField gaussian_bump(const Grid1D& grid, Complex amplitude, double center,
                        double sigma, int carrier_q) {
  if (!(sigma > 0.0)) {
    throw InvalidArgumentError("gaussian_bump: sigma must be positive");
  }
  if (!grid.admissible(carrier_q)) {
    throw AliasingError("gaussian_bump: carrier mode not representable");
  }
  const double k = grid.wavenumber(carrier_q);
  WaveField f(grid);
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.x(j);
    const double y = std::remainder(x - center, grid.length);
    f[j] = amplitude * std::exp(-y * y / (2.0 * sigma * sigma)) *
           std::exp(kImag * k * x);
  }
  return f;
}

}  // namespace nlselab
