#include "nlselab/model.hpp"

#include <algorithm>
#include <cmath>

#include "nlselab/errors.hpp"

namespace nlselab {

namespace {

constexpr Complex kImag{0.0, 1.0};

struct Assembled {
  Complex h_kin_coeff;  // multiplies lap psi inside H psi
  WaveField h_rest;     // everything else in H psi, pointwise
  std::vector<int> floored;
  // Density corrections relative to psi* H psi (see hamiltonian_density).
  double b_compensation = 0.0;   // +b |psi|^2
  double cubic_halving = 0.0;    // -(g/2) |psi|^4
};

void merge_mask(std::vector<int>& into, const std::vector<int>& extra) {
  into.insert(into.end(), extra.begin(), extra.end());
  std::sort(into.begin(), into.end());
  into.erase(std::unique(into.begin(), into.end()), into.end());
}

// ln(psi* psi) with the same relative amplitude floor as log_gradient.
std::vector<double> floored_log_density(const WaveField& psi, double floor,
                                        std::vector<int>& mask) {
  const double peak = psi.max_abs();
  if (peak == 0.0) {
    throw DegenerateFieldError("ln(psi*psi): field is identically zero");
  }
  const double cutoff = floor * peak;
  std::vector<double> out(static_cast<size_t>(psi.size()));
  std::vector<int> hits;
  for (int j = 0; j < psi.size(); ++j) {
    double mag = std::abs(psi[j]);
    if (mag < cutoff) {
      mag = cutoff;
      hits.push_back(j);
    }
    out[static_cast<size_t>(j)] = 2.0 * std::log(mag);
  }
  merge_mask(mask, hits);
  return out;
}

// lap(ln psi) = lap(psi)/psi - (grad psi / psi)^2, assembled pointwise so no
// global derivative ever acts on the branch-cut seam of ln psi.
WaveField log_laplacian(const ModelSpec& model, const WaveField& psi,
                        const WaveField& lg, std::vector<int>& mask) {
  const double peak = psi.max_abs();
  const double cutoff = model.log_floor * peak;
  WaveField lap = laplacian(psi, model.scheme);
  WaveField out(psi.grid);
  std::vector<int> hits;
  for (int j = 0; j < psi.size(); ++j) {
    Complex den = psi[j];
    const double mag = std::abs(den);
    if (mag < cutoff) {
      const Complex phase = (mag == 0.0) ? Complex{1.0, 0.0} : den / mag;
      den = cutoff * phase;
      hits.push_back(j);
    }
    out[j] = lap[j] / den - lg[j] * lg[j];
  }
  merge_mask(mask, hits);
  return out;
}

Assembled assemble(const ModelSpec& model, const WaveField& psi) {
  model.validate(psi.grid);
  if (!psi.all_finite()) {
    throw InvalidArgumentError("time_derivative: input field has non-finite entries");
  }

  const double m = model.m;
  const double h0 = model.hbar0;

  Assembled out;
  out.h_rest = WaveField(psi.grid);

  const bool has_u = !model.potential.empty();
  for (int j = 0; j < psi.size(); ++j) {
    if (has_u) out.h_rest[j] = model.potential[static_cast<size_t>(j)] * psi[j];
  }

  switch (model.variant) {
    case Variant::linear: {
      out.h_kin_coeff = -h0 * h0 / (2.0 * m);
      break;
    }
    case Variant::log_birula: {
      out.h_kin_coeff = -h0 * h0 / (2.0 * m);
      if (model.b != 0.0) {
        auto logs = floored_log_density(psi, model.log_floor, out.floored);
        for (int j = 0; j < psi.size(); ++j) {
          out.h_rest[j] += -model.b * logs[static_cast<size_t>(j)] * psi[j];
        }
      }
      break;
    }
    case Variant::kinematic: {
      out.h_kin_coeff = -h0 * h0 / (2.0 * m);
      if (model.a != 0.0) {
        auto lg = log_gradient(psi, model.log_floor, model.scheme);
        merge_mask(out.floored, lg.floored);
        const double coeff = (h0 * h0 / (2.0 * m)) * (model.a / m);
        for (int j = 0; j < psi.size(); ++j) {
          out.h_rest[j] += coeff * std::norm(lg.field[j]) * psi[j];
        }
      }
      break;
    }
    case Variant::hydro_combined: {
      out.h_kin_coeff = -h0 * h0 / (2.0 * m);
      if (model.b != 0.0) {
        auto logs = floored_log_density(psi, model.log_floor, out.floored);
        for (int j = 0; j < psi.size(); ++j) {
          out.h_rest[j] += -model.b * logs[static_cast<size_t>(j)] * psi[j];
        }
      }
      if (model.a != 0.0) {
        // -(a hbar0^2/8m^2)(grad ln(psi/psi*))^2 psi, with
        // grad ln(psi/psi*) = 2i Im(grad psi / psi): the phase gradient
        // route, free of the psi/psi* cancellation.
        auto lg = log_gradient(psi, model.log_floor, model.scheme);
        merge_mask(out.floored, lg.floored);
        const double coeff = model.a * h0 * h0 / (2.0 * m * m);
        for (int j = 0; j < psi.size(); ++j) {
          const double phase_grad = lg.field[j].imag();
          out.h_rest[j] += coeff * phase_grad * phase_grad * psi[j];
        }
      }
      break;
    }
    case Variant::fractal: {
      const Complex hbar = model.hbar_eff();
      out.h_kin_coeff = -hbar * model.alpha / (2.0 * m);
      if (model.beta != 0.0) {
        auto lg = log_gradient(psi, model.log_floor, model.scheme);
        merge_mask(out.floored, lg.floored);
        const Complex coeff = -kImag * hbar * model.beta / (2.0 * m);
        for (int j = 0; j < psi.size(); ++j) {
          out.h_rest[j] += coeff * lg.field[j] * lg.field[j] * psi[j];
        }
      }
      break;
    }
    case Variant::cubic_gp: {
      out.h_kin_coeff = -h0 * h0 / (2.0 * m);
      if (model.g != 0.0) {
        for (int j = 0; j < psi.size(); ++j) {
          out.h_rest[j] += model.g * std::norm(psi[j]) * psi[j];
        }
      }
      break;
    }
    case Variant::nabla2log: {
      out.h_kin_coeff = -h0 * h0 / (2.0 * m);
      const double gap = model.hbar_second - h0;
      if (gap != 0.0) {
        auto lg = log_gradient(psi, model.log_floor, model.scheme);
        merge_mask(out.floored, lg.floored);
        WaveField l2 = log_laplacian(model, psi, lg.field, out.floored);
        const double coeff = model.correction_sign * (h0 / (2.0 * m)) * gap;
        for (int j = 0; j < psi.size(); ++j) {
          out.h_rest[j] += coeff * l2[j] * psi[j];
        }
      }
      break;
    }
  }

  out.b_compensation =
      (model.variant == Variant::log_birula || model.variant == Variant::hydro_combined)
          ? model.b
          : 0.0;
  out.cubic_halving = (model.variant == Variant::cubic_gp) ? model.g : 0.0;
  return out;
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::linear: return "linear";
    case Variant::log_birula: return "log-birula";
    case Variant::kinematic: return "kinematic";
    case Variant::hydro_combined: return "hydro-combined";
    case Variant::fractal: return "fractal";
    case Variant::cubic_gp: return "cubic-gp";
    case Variant::nabla2log: return "nabla2log";
  }
  return "unknown";
}

std::optional<Variant> variant_from_name(const std::string& name) {
  for (Variant v : {Variant::linear, Variant::log_birula, Variant::kinematic,
                    Variant::hydro_combined, Variant::fractal, Variant::cubic_gp,
                    Variant::nabla2log}) {
    if (name == variant_name(v)) return v;
  }
  return std::nullopt;
}

Complex ModelSpec::hbar_eff() const {
  if (variant == Variant::fractal) return {alpha, beta};
  return {hbar0, 0.0};
}

double ModelSpec::hbar_linear() const {
  return variant == Variant::fractal ? alpha : hbar0;
}

double ModelSpec::stiffness_hbar() const {
  if (variant == Variant::fractal) return alpha;
  if (variant == Variant::nabla2log) return hbar0 + std::abs(hbar_second - hbar0);
  return hbar0;
}

void ModelSpec::validate(const Grid1D& grid) const {
  if (!(m > 0.0)) throw InvalidArgumentError("ModelSpec: m must be positive");
  if (!(hbar0 > 0.0)) throw InvalidArgumentError("ModelSpec: hbar0 must be positive");
  if (variant == Variant::fractal && !(alpha > 0.0)) {
    throw InvalidArgumentError("ModelSpec: fractal variant needs alpha > 0");
  }
  if (correction_sign != 1 && correction_sign != -1) {
    throw InvalidArgumentError("ModelSpec: correction_sign must be +1 or -1");
  }
  if (!(log_floor > 0.0)) {
    throw InvalidArgumentError("ModelSpec: log_floor must be positive");
  }
  if (!potential.empty() && static_cast<int>(potential.size()) != grid.n) {
    throw InvalidArgumentError("ModelSpec: potential sample count differs from grid");
  }
}

ModelOutput time_derivative(const ModelSpec& model, const WaveField& psi) {
  Assembled parts = assemble(model, psi);
  WaveField lap = laplacian(psi, model.scheme);

  ModelOutput out;
  out.h_action = WaveField(psi.grid);
  out.dpsi_dt = WaveField(psi.grid);
  const Complex i_hbar = kImag * model.hbar_eff();
  for (int j = 0; j < psi.size(); ++j) {
    out.h_action[j] = parts.h_kin_coeff * lap[j] + parts.h_rest[j];
    out.dpsi_dt[j] = out.h_action[j] / i_hbar;
  }
  out.floored = std::move(parts.floored);
  return out;
}

RhsParts time_derivative_parts(const ModelSpec& model, const WaveField& psi) {
  Assembled parts = assemble(model, psi);
  RhsParts out;
  const Complex i_hbar = kImag * model.hbar_eff();
  out.kinetic_coeff = parts.h_kin_coeff / i_hbar;
  out.rest = WaveField(psi.grid);
  for (int j = 0; j < psi.size(); ++j) out.rest[j] = parts.h_rest[j] / i_hbar;
  out.floored = std::move(parts.floored);
  return out;
}

std::vector<Complex> hamiltonian_density(const ModelSpec& model,
                                         const WaveField& psi) {
  Assembled parts = assemble(model, psi);
  WaveField lap = laplacian(psi, model.scheme);

  std::vector<Complex> density(static_cast<size_t>(psi.size()));
  for (int j = 0; j < psi.size(); ++j) {
    const Complex h_psi = parts.h_kin_coeff * lap[j] + parts.h_rest[j];
    Complex d = std::conj(psi[j]) * h_psi;
    const double abs2 = std::norm(psi[j]);
    d += parts.b_compensation * abs2;            // +b psi* psi
    d -= 0.5 * parts.cubic_halving * abs2 * abs2;  // (g/2)|psi|^4, not g|psi|^4
    density[static_cast<size_t>(j)] = d;
  }
  return density;
}

WaveField homogeneity_defect(const ModelSpec& model, const WaveField& psi,
                             Complex lambda) {
  if (lambda == Complex{0.0, 0.0}) {
    throw InvalidArgumentError("homogeneity_defect: lambda must be nonzero");
  }
  WaveField scaled(psi.grid);
  for (int j = 0; j < psi.size(); ++j) scaled[j] = lambda * psi[j];

  ModelOutput base = time_derivative(model, psi);
  ModelOutput bumped = time_derivative(model, scaled);

  WaveField defect(psi.grid);
  for (int j = 0; j < psi.size(); ++j) {
    defect[j] = bumped.dpsi_dt[j] - lambda * base.dpsi_dt[j];
  }
  return defect;
}

double log_identity_check(const WaveField& psi, double floor) {
  const double peak = psi.max_abs();
  if (peak == 0.0) {
    throw DegenerateFieldError("log_identity_check: field is identically zero");
  }
  // Route 1: grad ln(psi/psi*) from the unimodular field (psi/|psi|)^2.
  WaveField unimod(psi.grid);
  const double cutoff = floor * peak;
  for (int j = 0; j < psi.size(); ++j) {
    const double mag = std::abs(psi[j]);
    const Complex phase = (mag < cutoff)
                              ? (mag == 0.0 ? Complex{1.0, 0.0} : psi[j] / mag)
                              : psi[j] / mag;
    unimod[j] = phase * phase;
  }
  WaveField dq = gradient(unimod, Scheme::spectral);

  // Route 2: grad ln(psi*/psi) = -2i Im(grad psi / psi).
  auto lg = log_gradient(psi, floor, Scheme::spectral);

  double worst = 0.0;
  for (int j = 0; j < psi.size(); ++j) {
    const Complex r1 = dq[j] / unimod[j];
    const Complex r2 = Complex{0.0, -2.0} * lg.field[j].imag();
    worst = std::max(worst, std::abs(r1 * r2 + r1 * r1));
  }
  return worst;
}

}  // namespace nlselab
