#pragma once

#include <vector>

#include "nlselab/evolve.hpp"
#include "nlselab/model.hpp"
#include "nlselab/wave_field.hpp"

namespace nlselab {

/// psi_j = amplitude * e^{i (2 pi q / L) x_j}. Throws AliasingError for
/// |q| >= n/2.
WaveField plane_wave(const Grid1D& grid, int q, Complex amplitude);

/// Closed-form plane-wave energetics of a variant at wavenumber k.
/// energy_chain follows the printed symbolic chain (complex momentum label
/// p = hbar_eff k, E = p^2/2m); omega is the real rotation frequency of the
/// node amplitude, and energy_label = hbar0 * omega is the observable the
/// momentum label p = hbar0 k predicts.
struct DispersionPrediction {
  Complex energy_chain{0.0, 0.0};
  double omega = 0.0;
  double energy_label = 0.0;
};
DispersionPrediction predicted_dispersion(const ModelSpec& model, double k,
                                          Complex amplitude);

/// Evolve a plane wave and fit the complex node rate lambda with
/// psi(T)/psi(0) = e^{lambda T}. omega = -Im lambda, growth_rate = Re lambda,
/// energy_measured = i hbar0 lambda = hbar0 omega + i hbar0 growth.
struct DispersionResult {
  int q = 0;
  double k = 0.0;
  Complex rate{0.0, 0.0};  // fitted lambda
  double omega = 0.0;
  double growth_rate = 0.0;
  Complex energy_measured{0.0, 0.0};
  Complex energy_chain_measured{0.0, 0.0};  // i hbar_eff lambda
  DispersionPrediction predicted;
  double deviation = 0.0;        // |E_meas - E_label| / max(|E_label|, eps)
  double omega_deviation = 0.0;  // |omega - omega_pred| / max(|omega_pred|, eps)
  double shape_deviation = 0.0;
};
DispersionResult measure_dispersion(const ModelSpec& model, const Grid1D& grid,
                                    int q, Complex amplitude, double dt, double T,
                                    Integrator integrator = Integrator::rk4);

/// <psi, H psi>.
Complex energy_qm(const ModelSpec& model, const WaveField& psi);
/// Integral of the field-theory Hamiltonian density.
Complex energy_ft(const ModelSpec& model, const WaveField& psi);

/// Discrete functional-derivative check of the Weinberg form
/// i hbar dpsi/dt = dH/dpsi*: psi and psi* are perturbed as independent
/// fields (central differences in eps) and dE_FT/(eps dx) is compared with
/// the Hamiltonian action at every node. Returns the max deviation relative
/// to max|H psi|. drop_log_compensation removes the +b psi* psi density term
/// to expose its necessity.
struct WeinbergResult {
  double max_rel_deviation = 0.0;
  double h_scale = 0.0;      // max |H psi| used as the relative scale
  bool eps_in_range = true;  // eps within [1e-8, 1e-4]
};
WeinbergResult weinberg_check(const ModelSpec& model, const WaveField& psi,
                              double eps = 1e-6,
                              bool drop_log_compensation = false);

/// psi' = e^{iS/hbar_second} with S = hbar0 (phase - i ln|psi|), phase
/// unwrapped left to right from node 0. Throws PhaseUnwrapError when an
/// adjacent jump reaches pi.
struct LinearizationResult {
  WaveField mapped;
  int winding = 0;  // net phase turns over one period
};
LinearizationResult linearization_map(const WaveField& psi, double hbar0,
                                      double hbar_second);

}  // namespace nlselab
