#pragma once

#include <vector>

#include "nlselab/wave_field.hpp"

namespace nlselab {

/// Differentiation backend. Spectral is exact for band-limited fields;
/// central-2 is the second-order cross-check.
enum class Scheme { spectral, central2 };

WaveField gradient(const WaveField& f, Scheme scheme = Scheme::spectral);
WaveField laplacian(const WaveField& f, Scheme scheme = Scheme::spectral);

/// grad(f)/f with a relative amplitude floor at near-zero nodes.
struct LogGradient {
  WaveField field;
  std::vector<int> floored;  // node indices where the floor was applied
};

/// Pointwise grad(f)/f. Where |f_j| < floor * max|f|, the quotient uses the
/// floored magnitude with f's phase and records the node. Throws
/// DegenerateFieldError on an all-zero field.
LogGradient log_gradient(const WaveField& f, double floor = 1e-12,
                         Scheme scheme = Scheme::spectral);

/// Forward DFT coefficients (FFTW sign convention, unnormalized).
std::vector<Complex> spectrum(const WaveField& f);

/// Translate f by `shift` via the spectral shift theorem (exact for
/// band-limited fields).
WaveField spectral_shift(const WaveField& f, double shift);

}  // namespace nlselab
