#include "nlselab/evolve.hpp"

#include <cmath>
#include <string>

#include "dft.hpp"
#include "nlselab/errors.hpp"

namespace nlselab {

namespace {

constexpr Complex kImag{0.0, 1.0};
constexpr double kBlowUpFactor = 1e12;

WaveField rk4_generic(const ModelSpec& model, const WaveField& psi, double dt,
                      bool nonlinear_only) {
  auto rhs = [&](const WaveField& f) -> WaveField {
    if (nonlinear_only) {
      return time_derivative_parts(model, f).rest;
    }
    return time_derivative(model, f).dpsi_dt;
  };

  const int n = psi.size();
  WaveField k1 = rhs(psi);
  WaveField stage(psi.grid);

  for (int j = 0; j < n; ++j) stage[j] = psi[j] + 0.5 * dt * k1[j];
  WaveField k2 = rhs(stage);
  for (int j = 0; j < n; ++j) stage[j] = psi[j] + 0.5 * dt * k2[j];
  WaveField k3 = rhs(stage);
  for (int j = 0; j < n; ++j) stage[j] = psi[j] + dt * k3[j];
  WaveField k4 = rhs(stage);

  WaveField out(psi.grid);
  const double w = dt / 6.0;
  for (int j = 0; j < n; ++j) {
    out[j] = psi[j] + w * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
  return out;
}

void check_blowup(const WaveField& out, double initial_peak, double t, long step) {
  if (!out.all_finite() || out.max_abs() > kBlowUpFactor * initial_peak) {
    throw BlowUpError("evolution blew up at t = " + std::to_string(t) +
                          " (step " + std::to_string(step) + ")",
                      t, step);
  }
}

}  // namespace

void EvolveConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidArgumentError("EvolveConfig: dt must be positive");
  if (n_steps <= 0) throw InvalidArgumentError("EvolveConfig: n_steps must be positive");
  if (record_every <= 0) {
    throw InvalidArgumentError("EvolveConfig: record_every must be positive");
  }
  if (cfl < 0.0) throw InvalidArgumentError("EvolveConfig: cfl must be non-negative");
}

double rk4_stability_limit(const ModelSpec& model, const Grid1D& grid, double cfl) {
  if (cfl <= 0.0) cfl = model.scheme == Scheme::spectral ? 0.25 : 0.5;
  return cfl * (2.0 * model.m / model.stiffness_hbar()) * grid.dx * grid.dx;
}

WaveField step_rk4(const ModelSpec& model, const WaveField& psi, double dt,
                   double cfl) {
  const double limit = rk4_stability_limit(model, psi.grid, cfl);
  if (dt > limit) {
    throw StabilityError("step_rk4: dt = " + std::to_string(dt) +
                         " exceeds the guard " + std::to_string(limit));
  }
  WaveField out = rk4_generic(model, psi, dt, false);
  check_blowup(out, psi.max_abs(), dt, 1);
  return out;
}

WaveField step_split(const ModelSpec& model, const WaveField& psi, double dt) {
  const int n = psi.grid.n;
  const Complex c_kin = kImag * model.hbar_linear() / (2.0 * model.m);

  auto k = detail::fft_wavenumbers(n, psi.grid.length);
  auto half_kinetic = [&](const WaveField& f) -> WaveField {
    auto coeff = detail::dft(f.values, true);
    for (int q = 0; q < n; ++q) {
      const double kq = k[static_cast<size_t>(q)];
      coeff[static_cast<size_t>(q)] *= std::exp(-c_kin * kq * kq * (0.5 * dt));
    }
    auto back = detail::dft(coeff, false);
    WaveField out(f.grid);
    const double inv_n = 1.0 / n;
    for (int j = 0; j < n; ++j) out[j] = back[static_cast<size_t>(j)] * inv_n;
    return out;
  };

  WaveField mid = half_kinetic(psi);
  mid = rk4_generic(model, mid, dt, true);
  WaveField out = half_kinetic(mid);
  check_blowup(out, psi.max_abs(), dt, 1);
  return out;
}

EvolveResult evolve(const ModelSpec& model, const WaveField& psi0,
                    const EvolveConfig& config) {
  config.validate();
  if (config.integrator == Integrator::rk4) {
    const double limit = rk4_stability_limit(model, psi0.grid, config.cfl);
    if (config.dt > limit) {
      throw StabilityError("evolve: dt = " + std::to_string(config.dt) +
                           " exceeds the rk4 guard " + std::to_string(limit));
    }
  }

  const double initial_peak = psi0.max_abs();
  const long n_steps = config.n_steps;

  std::vector<WaveField> recorded_fields;
  std::vector<long> recorded_steps;
  std::vector<double> norm2_series(static_cast<size_t>(n_steps) + 1);

  WaveField psi = psi0;
  norm2_series[0] = norm_squared(psi);

  auto should_record = [&](long step) {
    return step == 0 || step == n_steps || step % config.record_every == 0;
  };

  if (should_record(0)) {
    recorded_fields.push_back(psi);
    recorded_steps.push_back(0);
  }

  for (long step = 1; step <= n_steps; ++step) {
    const double t = step * config.dt;
    try {
      psi = (config.integrator == Integrator::rk4)
                ? rk4_generic(model, psi, config.dt, false)
                : step_split(model, psi, config.dt);
    } catch (const BlowUpError&) {
      throw;
    } catch (const Error& e) {
      throw Error(std::string(e.what()) + " (at t = " + std::to_string(t) + ")");
    }
    check_blowup(psi, initial_peak, t, step);
    norm2_series[static_cast<size_t>(step)] = norm_squared(psi);
    if (should_record(step)) {
      recorded_fields.push_back(psi);
      recorded_steps.push_back(step);
    }
  }

  EvolveResult result;
  result.psi = psi;
  result.records.reserve(recorded_fields.size());
  for (size_t i = 0; i < recorded_fields.size(); ++i) {
    const long step = recorded_steps[i];
    const WaveField& f = recorded_fields[i];

    DiagnosticsRecord rec;
    rec.t = step * config.dt;
    rec.norm2 = norm2_series[static_cast<size_t>(step)];

    ModelOutput mo = time_derivative(model, f);
    rec.energy_qm = inner_product(f, mo.h_action);
    const auto density = hamiltonian_density(model, f);
    Complex eft{0.0, 0.0};
    for (const Complex& d : density) eft += d;
    rec.energy_ft = eft * f.grid.dx;
    rec.norm_rate_analytic = 2.0 * inner_product(f, mo.dpsi_dt).real();
    rec.floored_count = static_cast<int>(mo.floored.size());

    // Central difference on the per-step norm series; one-sided at the ends.
    const auto& ns = norm2_series;
    if (step == 0) {
      rec.norm_rate_numeric = n_steps > 0 ? (ns[1] - ns[0]) / config.dt : 0.0;
    } else if (step == n_steps) {
      rec.norm_rate_numeric =
          (ns[static_cast<size_t>(step)] - ns[static_cast<size_t>(step - 1)]) /
          config.dt;
    } else {
      rec.norm_rate_numeric = (ns[static_cast<size_t>(step + 1)] -
                               ns[static_cast<size_t>(step - 1)]) /
                              (2.0 * config.dt);
    }
    result.records.push_back(rec);
  }
  return result;
}

NormRate norm_rate_check(const ModelSpec& model, const WaveField& psi) {
  ModelOutput mo = time_derivative(model, psi);
  NormRate rate;
  rate.analytic = 2.0 * inner_product(psi, mo.dpsi_dt).real();

  if (model.variant == Variant::fractal && model.beta != 0.0) {
    // iW psi contributes (W/hbar) psi to dpsi/dt, W = -(hbar beta/2m)(grad ln psi)^2.
    auto lg = log_gradient(psi, model.log_floor, model.scheme);
    WaveField w_part(psi.grid);
    const double coeff = -model.beta / (2.0 * model.m);
    for (int j = 0; j < psi.size(); ++j) {
      w_part[j] = coeff * lg.field[j] * lg.field[j] * psi[j];
    }
    rate.source_w = 2.0 * inner_product(psi, w_part).real();
  }
  rate.remainder = rate.analytic - rate.source_w;
  return rate;
}

}  // namespace nlselab
