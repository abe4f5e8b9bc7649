#pragma once

#include <complex>
#include <vector>

#include "nlselab/grid.hpp"

namespace nlselab {

using Complex = std::complex<double>;

/// Complex scalar field sampled on a periodic grid.
struct WaveField {
  Grid1D grid;
  std::vector<Complex> values;

  WaveField() = default;
  explicit WaveField(const Grid1D& g) : grid(g), values(g.n, Complex{0.0, 0.0}) {}
  WaveField(const Grid1D& g, std::vector<Complex> v) : grid(g), values(std::move(v)) {}

  int size() const { return static_cast<int>(values.size()); }
  Complex& operator[](int j) { return values[static_cast<size_t>(j)]; }
  const Complex& operator[](int j) const { return values[static_cast<size_t>(j)]; }

  bool all_finite() const;
  double max_abs() const;
};

/// Periodic rectangle rule for sum_j conj(f_j) g_j dx. Throws ShapeError on
/// grid mismatch.
Complex inner_product(const WaveField& f, const WaveField& g);

/// norm^2 = <f, f> (real, non-negative).
double norm_squared(const WaveField& f);

/// max_j |f_j - g_j|. Throws ShapeError on grid mismatch.
double max_abs_diff(const WaveField& f, const WaveField& g);

}  // namespace nlselab
