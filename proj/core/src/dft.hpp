#pragma once

#include <complex>
#include <vector>

namespace nlselab::detail {

// Unnormalized complex DFT, FFTW sign convention: forward multiplies by
// e^{-2*pi*i*q*j/n}. The inverse transform divides by n.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in,
                                      bool forward);

// FFT-ordered wavenumbers 2*pi*q/L with q in [0, n/2] u [-n/2+1, -1).
// The Nyquist slot (even n) carries +pi*n/L; odd-derivative multipliers
// must zero it separately.
std::vector<double> fft_wavenumbers(int n, double length);

}  // namespace nlselab::detail
