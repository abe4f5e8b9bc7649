#pragma once

#include <vector>

#include "nlselab/model.hpp"
#include "nlselab/wave_field.hpp"

namespace nlselab {

enum class Integrator { rk4, split_step };

struct EvolveConfig {
  double dt = 1e-3;
  long n_steps = 100;
  long record_every = 1;
  Integrator integrator = Integrator::rk4;
  // rk4 stability guard factor; 0 picks the scheme default (0.25 spectral,
  // 0.5 central-2). The spectral laplacian reaches pi^2/dx^2 at Nyquist, so
  // its guard must stay below 2 sqrt(2)/pi^2 ~ 0.287.
  double cfl = 0.0;

  void validate() const;  // throws InvalidArgumentError
};

struct DiagnosticsRecord {
  double t = 0.0;
  double norm2 = 0.0;
  Complex energy_qm{0.0, 0.0};  // <psi, H psi>
  Complex energy_ft{0.0, 0.0};  // integral of the Hamiltonian density
  double norm_rate_numeric = 0.0;
  double norm_rate_analytic = 0.0;  // 2 Re <psi, dpsi/dt>
  int floored_count = 0;
};

/// Stability guard dt <= cfl * (2m / hbar_linear) * dx^2; cfl = 0 picks the
/// scheme default.
double rk4_stability_limit(const ModelSpec& model, const Grid1D& grid,
                           double cfl = 0.0);

/// One classical explicit rk4 step. Throws StabilityError before any
/// arithmetic if dt violates the guard; BlowUpError on runaway output.
WaveField step_rk4(const ModelSpec& model, const WaveField& psi, double dt,
                   double cfl = 0.0);

/// One Strang split step: exact linear half-step in wavenumber space, one rk4
/// step of the remaining (nonlinear + potential) part, exact half-step.
WaveField step_split(const ModelSpec& model, const WaveField& psi, double dt);

struct EvolveResult {
  WaveField psi;
  std::vector<DiagnosticsRecord> records;
};

/// March n_steps, recording diagnostics every record_every steps (step 0 and
/// the final step always included). Step failures carry the failing time.
EvolveResult evolve(const ModelSpec& model, const WaveField& psi0,
                    const EvolveConfig& config);

/// Analytic norm rate and its decomposition. source_w isolates the
/// anti-Hermitian imaginary-potential contribution (the fractal iW term);
/// remainder is everything else.
struct NormRate {
  double analytic = 0.0;  // 2 Re <psi, dpsi/dt>
  double source_w = 0.0;  // 2 Re <psi, (1/i hbar)(iW) psi>
  double remainder = 0.0;
};
NormRate norm_rate_check(const ModelSpec& model, const WaveField& psi);

}  // namespace nlselab
