#include "nlselab/calculus.hpp"

#include <cmath>

#include "dft.hpp"
#include "nlselab/errors.hpp"

namespace nlselab {

namespace {

constexpr Complex kImag{0.0, 1.0};

WaveField spectral_apply(const WaveField& f,
                         const std::vector<Complex>& multiplier) {
  auto coeff = detail::dft(f.values, true);
  for (size_t q = 0; q < coeff.size(); ++q) coeff[q] *= multiplier[q];
  auto back = detail::dft(coeff, false);
  WaveField out(f.grid);
  const double inv_n = 1.0 / f.grid.n;
  for (int j = 0; j < f.size(); ++j) out[j] = back[static_cast<size_t>(j)] * inv_n;
  return out;
}

}  // namespace

WaveField gradient(const WaveField& f, Scheme scheme) {
  const int n = f.grid.n;
  if (scheme == Scheme::spectral) {
    auto k = detail::fft_wavenumbers(n, f.grid.length);
    std::vector<Complex> mult(static_cast<size_t>(n));
    for (int q = 0; q < n; ++q) mult[static_cast<size_t>(q)] = kImag * k[static_cast<size_t>(q)];
    // The Nyquist mode has no well-defined first derivative; drop it.
    if (n % 2 == 0) mult[static_cast<size_t>(n / 2)] = 0.0;
    return spectral_apply(f, mult);
  }
  WaveField out(f.grid);
  const double inv2dx = 1.0 / (2.0 * f.grid.dx);
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    const int jm = (j + n - 1) % n;
    out[j] = (f[jp] - f[jm]) * inv2dx;
  }
  return out;
}

WaveField laplacian(const WaveField& f, Scheme scheme) {
  const int n = f.grid.n;
  if (scheme == Scheme::spectral) {
    auto k = detail::fft_wavenumbers(n, f.grid.length);
    std::vector<Complex> mult(static_cast<size_t>(n));
    for (int q = 0; q < n; ++q) {
      const double kq = k[static_cast<size_t>(q)];
      mult[static_cast<size_t>(q)] = -kq * kq;
    }
    return spectral_apply(f, mult);
  }
  WaveField out(f.grid);
  const double invdx2 = 1.0 / (f.grid.dx * f.grid.dx);
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    const int jm = (j + n - 1) % n;
    out[j] = (f[jp] - 2.0 * f[j] + f[jm]) * invdx2;
  }
  return out;
}

LogGradient log_gradient(const WaveField& f, double floor, Scheme scheme) {
  if (!(floor > 0.0)) {
    throw InvalidArgumentError("log_gradient: floor must be positive");
  }
  const double peak = f.max_abs();
  if (peak == 0.0) {
    throw DegenerateFieldError("log_gradient: field is identically zero");
  }
  const double cutoff = floor * peak;

  LogGradient result;
  result.field = gradient(f, scheme);
  for (int j = 0; j < f.size(); ++j) {
    const Complex v = f[j];
    const double mag = std::abs(v);
    if (mag < cutoff) {
      // Floored magnitude, original phase; exact zeros get phase 1.
      const Complex phase = (mag == 0.0) ? Complex{1.0, 0.0} : v / mag;
      result.field[j] /= cutoff * phase;
      result.floored.push_back(j);
    } else {
      result.field[j] /= v;
    }
  }
  return result;
}

std::vector<Complex> spectrum(const WaveField& f) {
  return detail::dft(f.values, true);
}

WaveField spectral_shift(const WaveField& f, double shift) {
  const int n = f.grid.n;
  auto k = detail::fft_wavenumbers(n, f.grid.length);
  std::vector<Complex> mult(static_cast<size_t>(n));
  for (int q = 0; q < n; ++q) {
    mult[static_cast<size_t>(q)] = std::exp(-kImag * k[static_cast<size_t>(q)] * shift);
  }
  // Keep the shifted Nyquist mode real so real fields stay real.
  if (n % 2 == 0) {
    const int ny = n / 2;
    mult[static_cast<size_t>(ny)] = std::cos(k[static_cast<size_t>(ny)] * shift);
  }
  return spectral_apply(f, mult);
}

}  // namespace nlselab
