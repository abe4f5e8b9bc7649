#include "nlselab/grid.hpp"

#include <cmath>
#include <string>

#include "nlselab/errors.hpp"

namespace nlselab {

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) xs[static_cast<size_t>(j)] = x(j);
  return xs;
}

double Grid1D::wavenumber(int q) const { return 2.0 * M_PI * q / length; }

bool Grid1D::admissible(int q) const { return 2 * std::abs(q) < n; }

Grid1D make_grid(double length, int n) {
  if (!(length > 0.0)) {
    throw InvalidArgumentError("make_grid: length must be positive, got " +
                               std::to_string(length));
  }
  if (n < 8) {
    throw InvalidArgumentError("make_grid: need at least 8 nodes, got " +
                               std::to_string(n));
  }
  Grid1D g;
  g.length = length;
  g.n = n;
  g.dx = length / n;
  return g;
}

}  // namespace nlselab
