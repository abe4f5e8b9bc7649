#include "nlselab/analysis.hpp"

#include <cmath>
#include <string>

#include "nlselab/errors.hpp"

namespace nlselab {

namespace {

constexpr Complex kImag{0.0, 1.0};

double wrap_to_pi(double d) { return std::remainder(d, 2.0 * M_PI); }

}  // namespace

WaveField plane_wave(const Grid1D& grid, int q, Complex amplitude) {
  if (!grid.admissible(q)) {
    throw AliasingError("plane_wave: mode q = " + std::to_string(q) +
                        " is not representable on n = " + std::to_string(grid.n));
  }
  const double k = grid.wavenumber(q);
  WaveField f(grid);
  for (int j = 0; j < grid.n; ++j) {
    f[j] = amplitude * std::exp(kImag * k * grid.x(j));
  }
  return f;
}

DispersionPrediction predicted_dispersion(const ModelSpec& model, double k,
                                          Complex amplitude) {
  const double m = model.m;
  const double h0 = model.hbar0;
  const double free_energy = h0 * h0 * k * k / (2.0 * m);
  const double abs2 = std::norm(amplitude);

  DispersionPrediction p;
  switch (model.variant) {
    case Variant::linear:
    case Variant::nabla2log:  // lap ln psi vanishes on plane waves
      p.energy_label = free_energy;
      break;
    case Variant::log_birula:
      p.energy_label = free_energy - model.b * std::log(abs2);
      break;
    case Variant::kinematic:
      p.energy_label = free_energy * (1.0 + model.a / m);
      break;
    case Variant::hydro_combined:
      p.energy_label = free_energy * (1.0 + model.a / m) - model.b * std::log(abs2);
      break;
    case Variant::cubic_gp:
      p.energy_label = free_energy + model.g * abs2;
      break;
    case Variant::fractal: {
      const Complex hbar = model.hbar_eff();
      p.energy_chain = hbar * hbar * k * k / (2.0 * m);  // (hbar k)^2 / 2m
      p.omega = model.alpha * k * k / (2.0 * m);
      p.energy_label = h0 * p.omega;
      return p;
    }
    default:
      throw NotApplicableError("predicted_dispersion: unsupported variant");
  }
  p.omega = p.energy_label / h0;
  p.energy_chain = p.energy_label;
  return p;
}

DispersionResult measure_dispersion(const ModelSpec& model, const Grid1D& grid,
                                    int q, Complex amplitude, double dt, double T,
                                    Integrator integrator) {
  if (!model.potential.empty()) {
    throw InvalidArgumentError("measure_dispersion: requires U = 0");
  }
  if (!(dt > 0.0) || !(T > dt)) {
    throw InvalidArgumentError("measure_dispersion: need 0 < dt < T");
  }

  const WaveField psi0 = plane_wave(grid, q, amplitude);
  const long n_steps = std::lround(T / dt);
  const double t_total = n_steps * dt;

  // Track the reference-node value often enough to unwrap its phase.
  const long stride = std::max<long>(1, n_steps / 256);
  WaveField psi = psi0;
  const int ref = 0;

  double phase = 0.0;
  Complex prev = psi[ref];
  for (long step = 1; step <= n_steps; ++step) {
    psi = (integrator == Integrator::rk4) ? step_rk4(model, psi, dt)
                                          : step_split(model, psi, dt);
    if (step % stride == 0 || step == n_steps) {
      const Complex cur = psi[ref];
      phase += wrap_to_pi(std::arg(cur) - std::arg(prev));
      prev = cur;
    }
  }

  const double growth = std::log(std::abs(psi[ref]) / std::abs(psi0[ref])) / t_total;
  const Complex lambda{growth, phase / t_total};

  DispersionResult r;
  r.q = q;
  r.k = grid.wavenumber(q);
  r.rate = lambda;
  r.omega = -lambda.imag();
  r.growth_rate = lambda.real();
  r.energy_measured = kImag * model.hbar0 * lambda;
  r.energy_chain_measured = kImag * model.hbar_eff() * lambda;
  r.predicted = predicted_dispersion(model, r.k, amplitude);

  const double eps = 1e-300;
  r.deviation = std::abs(r.energy_measured - Complex{r.predicted.energy_label, 0.0}) /
                std::max(std::abs(r.predicted.energy_label), eps);
  r.omega_deviation = std::abs(r.omega - r.predicted.omega) /
                      std::max(std::abs(r.predicted.omega), eps);

  // A plane wave must stay a plane wave: compare node-normalized shapes.
  double shape = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    shape = std::max(shape, std::abs(psi[j] / psi[ref] - psi0[j] / psi0[ref]));
  }
  r.shape_deviation = shape;
  if (shape > 1e-6) {
    throw NotASolutionError(
        "measure_dispersion: plane wave deformed (shape deviation " +
        std::to_string(shape) + ")");
  }
  return r;
}

Complex energy_qm(const ModelSpec& model, const WaveField& psi) {
  ModelOutput mo = time_derivative(model, psi);
  return inner_product(psi, mo.h_action);
}

Complex energy_ft(const ModelSpec& model, const WaveField& psi) {
  const auto density = hamiltonian_density(model, psi);
  Complex acc{0.0, 0.0};
  for (const Complex& d : density) acc += d;
  return acc * psi.grid.dx;
}

namespace {

// E_FT with psi and psi* as independent fields, holomorphic in each psi*_j.
// The psi-side derivative arrays are computed once by the caller.
Complex eft_independent(const ModelSpec& model, const WaveField& psi,
                        const std::vector<Complex>& psi_star,
                        const WaveField& lap_psi, const WaveField& lg,
                        bool drop_log_compensation) {
  const double m = model.m;
  const double h0 = model.hbar0;
  const bool has_u = !model.potential.empty();

  Complex acc{0.0, 0.0};
  for (int j = 0; j < psi.size(); ++j) {
    const Complex ps = psi_star[static_cast<size_t>(j)];
    const Complex pp = ps * psi[j];
    Complex d{0.0, 0.0};
    if (has_u) d += model.potential[static_cast<size_t>(j)] * pp;
    switch (model.variant) {
      case Variant::linear:
        d += -(h0 * h0 / (2.0 * m)) * ps * lap_psi[j];
        break;
      case Variant::log_birula:
        d += -(h0 * h0 / (2.0 * m)) * ps * lap_psi[j];
        d += -model.b * ps * std::log(pp) * psi[j];
        if (!drop_log_compensation) d += model.b * pp;
        break;
      case Variant::cubic_gp:
        d += -(h0 * h0 / (2.0 * m)) * ps * lap_psi[j];
        d += 0.5 * model.g * pp * pp;
        break;
      case Variant::fractal: {
        const Complex hbar = model.hbar_eff();
        d += -(hbar * model.alpha / (2.0 * m)) * ps * lap_psi[j];
        d += -kImag * (hbar * model.beta / (2.0 * m)) * ps * lg[j] * lg[j] * psi[j];
        break;
      }
      default:
        throw NotApplicableError(
            "weinberg_check: density is not defined with independent psi/psi* "
            "for this variant");
    }
    acc += d;
  }
  return acc * psi.grid.dx;
}

}  // namespace

WeinbergResult weinberg_check(const ModelSpec& model, const WaveField& psi,
                              double eps, bool drop_log_compensation) {
  if (!(eps > 0.0)) throw InvalidArgumentError("weinberg_check: eps must be positive");
  if (model.variant != Variant::linear && model.variant != Variant::log_birula &&
      model.variant != Variant::cubic_gp && model.variant != Variant::fractal) {
    throw NotApplicableError(
        "weinberg_check: density is not defined with independent psi/psi* for "
        "this variant");
  }

  WaveField lap_psi = laplacian(psi, model.scheme);
  WaveField lg(psi.grid);
  if (model.variant == Variant::fractal && model.beta != 0.0) {
    lg = log_gradient(psi, model.log_floor, model.scheme).field;
  }

  ModelOutput mo = time_derivative(model, psi);
  double scale = 0.0;
  for (int j = 0; j < psi.size(); ++j) {
    scale = std::max(scale, std::abs(mo.h_action[j]));
  }
  if (scale == 0.0) scale = 1.0;

  std::vector<Complex> psi_star(static_cast<size_t>(psi.size()));
  for (int j = 0; j < psi.size(); ++j) psi_star[static_cast<size_t>(j)] = std::conj(psi[j]);

  WeinbergResult result;
  result.h_scale = scale;
  result.eps_in_range = eps >= 1e-8 && eps <= 1e-4;
  const double inv = 1.0 / (2.0 * eps * psi.grid.dx);
  for (int j = 0; j < psi.size(); ++j) {
    const Complex saved = psi_star[static_cast<size_t>(j)];
    psi_star[static_cast<size_t>(j)] = saved + eps;
    const Complex plus = eft_independent(model, psi, psi_star, lap_psi, lg,
                                         drop_log_compensation);
    psi_star[static_cast<size_t>(j)] = saved - eps;
    const Complex minus = eft_independent(model, psi, psi_star, lap_psi, lg,
                                          drop_log_compensation);
    psi_star[static_cast<size_t>(j)] = saved;

    const Complex functional_derivative = (plus - minus) * inv;
    const double dev = std::abs(functional_derivative - mo.h_action[j]) / scale;
    result.max_rel_deviation = std::max(result.max_rel_deviation, dev);
  }
  return result;
}

LinearizationResult linearization_map(const WaveField& psi, double hbar0,
                                      double hbar_second) {
  if (!(hbar0 > 0.0) || hbar_second == 0.0) {
    throw InvalidArgumentError("linearization_map: bad Planck constants");
  }
  if (psi.max_abs() == 0.0) {
    throw DegenerateFieldError("linearization_map: field is identically zero");
  }
  const int n = psi.size();
  std::vector<double> theta(static_cast<size_t>(n));
  theta[0] = std::arg(psi[0]);
  for (int j = 1; j < n; ++j) {
    const double jump = wrap_to_pi(std::arg(psi[j]) - std::arg(psi[j - 1]));
    if (std::abs(jump) >= M_PI * (1.0 - 1e-9)) {
      throw PhaseUnwrapError("linearization_map: adjacent phase jump of pi at node " +
                             std::to_string(j));
    }
    theta[static_cast<size_t>(j)] = theta[static_cast<size_t>(j - 1)] + jump;
  }
  const double closing = wrap_to_pi(std::arg(psi[0]) - std::arg(psi[n - 1]));
  const double total = theta[static_cast<size_t>(n - 1)] + closing - theta[0];

  LinearizationResult result;
  result.winding = static_cast<int>(std::lround(total / (2.0 * M_PI)));
  result.mapped = WaveField(psi.grid);

  const double ratio = hbar0 / hbar_second;
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(psi[j]);
    if (mag == 0.0) {
      throw DegenerateFieldError("linearization_map: zero amplitude at node " +
                                 std::to_string(j));
    }
    // S = hbar0 (theta - i ln|psi|); psi' = e^{iS/hbar'} = psi^{hbar0/hbar'}.
    const Complex log_psi{std::log(mag), theta[static_cast<size_t>(j)]};
    result.mapped[j] = std::exp(ratio * log_psi);
  }
  return result;
}

}  // namespace nlselab
