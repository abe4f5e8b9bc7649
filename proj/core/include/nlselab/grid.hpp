#pragma once

#include <vector>

namespace nlselab {

/// Uniform periodic 1-D grid on [0, L); x = L is identified with x = 0.
struct Grid1D {
  double length = 0.0;  // L
  int n = 0;            // node count
  double dx = 0.0;      // L / n

  double x(int j) const { return j * dx; }
  std::vector<double> nodes() const;

  /// k = 2*pi*q / L for an integer mode index q.
  double wavenumber(int q) const;

  /// Plane waves e^{ikx} are exactly representable for |q| < n/2.
  bool admissible(int q) const;

  bool operator==(const Grid1D& other) const {
    return length == other.length && n == other.n;
  }
};

/// Throws InvalidArgumentError unless L > 0 and n >= 8.
Grid1D make_grid(double length, int n);

}  // namespace nlselab
