#include "nlselab/wave_field.hpp"

#include <algorithm>
#include <cmath>

#include "nlselab/errors.hpp"

namespace nlselab {

bool WaveField::all_finite() const {
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

double WaveField::max_abs() const {
  double m = 0.0;
  for (const Complex& v : values) m = std::max(m, std::abs(v));
  return m;
}

namespace {
void require_same_grid(const WaveField& f, const WaveField& g, const char* op) {
  if (!(f.grid == g.grid) || f.size() != g.size()) {
    throw ShapeError(std::string(op) + ": fields live on different grids");
  }
}
}  // namespace

Complex inner_product(const WaveField& f, const WaveField& g) {
  require_same_grid(f, g, "inner_product");
  Complex acc{0.0, 0.0};
  for (int j = 0; j < f.size(); ++j) acc += std::conj(f[j]) * g[j];
  return acc * f.grid.dx;
}

double norm_squared(const WaveField& f) {
  double acc = 0.0;
  for (const Complex& v : f.values) acc += std::norm(v);
  return acc * f.grid.dx;
}

double max_abs_diff(const WaveField& f, const WaveField& g) {
  require_same_grid(f, g, "max_abs_diff");
  double m = 0.0;
  for (int j = 0; j < f.size(); ++j) m = std::max(m, std::abs(f[j] - g[j]));
  return m;
}

}  // namespace nlselab
