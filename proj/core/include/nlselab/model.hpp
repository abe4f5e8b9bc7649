#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlselab/calculus.hpp"
#include "nlselab/wave_field.hpp"

namespace nlselab {

/// The equation-of-motion catalog. Every variant is written as
/// i*hbar_eff dpsi/dt = H[psi] with hbar_eff = alpha + i*beta for the
/// fractal variant and hbar0 otherwise.
enum class Variant {
  linear,          // H = -(hbar0^2/2m) lap + U
  log_birula,      // + the logarithmic potential -b ln(psi* psi)
  kinematic,       // + (hbar0^2/2m)(a/m) |grad ln psi|^2
  hydro_combined,  // log term plus the phase-gradient kinematic-pressure term
  fractal,         // complex hbar = alpha + i beta, -i(hbar beta/2m)(grad ln psi)^2
  cubic_gp,        // + g |psi|^2
  nabla2log,       // + sigma (hbar0/2m)(hbar' - hbar0)(lap ln psi)
};

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string& name);

struct ModelSpec {
  Variant variant = Variant::linear;
  double m = 1.0;
  double hbar0 = 1.0;
  double alpha = 1.0;        // Re hbar (fractal)
  double beta = 0.0;         // Im hbar (fractal); beta = 0 reduces to linear
  double a = 0.0;            // kinematic mass-energy parameter
  double b = 0.0;            // logarithmic mass-energy parameter
  double g = 0.0;            // cubic coupling
  double hbar_second = 1.0;  // the second real constant hbar = 2mD (nabla2log)
  int correction_sign = -1;  // side of the equation for the nabla2log term
  std::vector<double> potential;  // external U samples; empty means U = 0
  Scheme scheme = Scheme::spectral;
  double log_floor = 1e-12;

  Complex hbar_eff() const;
  /// hbar entering the kinetic coefficient: alpha for fractal, hbar0 else.
  double hbar_linear() const;
  /// hbar governing the high-wavenumber stiffness of the full right-hand
  /// side. The log-laplacian correction shifts the effective dispersion to
  /// hbar0 -> hbar0 + sigma (hbar' - hbar0), so its guard must cover it.
  double stiffness_hbar() const;
  /// Throws InvalidArgumentError on bad parameters or a U/grid size mismatch.
  void validate(const Grid1D& grid) const;
};

struct ModelOutput {
  WaveField dpsi_dt;
  WaveField h_action;        // H psi, with dpsi_dt = h_action / (i hbar_eff)
  std::vector<int> floored;  // nodes regularized inside grad ln psi / ln psi*psi
};

/// Right-hand side of the active variant. Throws on degenerate fields where a
/// logarithm is required.
ModelOutput time_derivative(const ModelSpec& model, const WaveField& psi);

/// Split of dpsi/dt into the constant-coefficient kinetic part and the rest:
/// dpsi/dt = kinetic_coeff * lap psi + rest. Used by the split-step
/// integrator and by callers that need the nonlinear part alone.
struct RhsParts {
  Complex kinetic_coeff;  // i*hbar_linear/(2m)
  WaveField rest;
  std::vector<int> floored;
};
RhsParts time_derivative_parts(const ModelSpec& model, const WaveField& psi);

/// Per-node field-theory Hamiltonian density; its rectangle-rule sum is E_FT.
std::vector<Complex> hamiltonian_density(const ModelSpec& model,
                                         const WaveField& psi);

/// time_derivative(lambda psi) - lambda * time_derivative(psi), pointwise.
/// Vanishes for degree-one homogeneous variants.
WaveField homogeneity_defect(const ModelSpec& model, const WaveField& psi,
                             Complex lambda);

/// Max-abs of grad ln(psi/psi*) . grad ln(psi*/psi) + (grad ln(psi/psi*))^2,
/// with the two factors computed along independent numerical routes so the
/// identity is a real consistency check rather than algebra on one array.
double log_identity_check(const WaveField& psi, double floor = 1e-12);

}  // namespace nlselab
