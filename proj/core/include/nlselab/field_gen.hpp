#pragma once

#include <cstdint>

#include "nlselab/wave_field.hpp"

namespace nlselab {

/// Band-limited random field: modes |q| <= q_max with complex Gaussian
/// coefficients from the portable sampler, normalized to unit peak order.
WaveField random_bandlimited(const Grid1D& grid, int q_max, uint64_t seed);

/// Strictly node-free smooth field e^{u + iv} with band-limited real u, v of
/// amplitude `amp`. Suitable wherever ln psi or grad ln psi must stay tame.
WaveField random_nodefree(const Grid1D& grid, int q_max, uint64_t seed,
                          double amp = 0.5);

/// amplitude * exp(-(x - center)^2 / (2 sigma^2)) * e^{i k_q x}, argument
/// wrapped to the nearest periodic image.
WaveField gaussian_bump(const Grid1D& grid, Complex amplitude, double center,
                        double sigma, int carrier_q = 0);

}  // namespace nlselab
