#include "nlselab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "json.hpp"
#include "nlselab/analysis.hpp"
#include "nlselab/errors.hpp"
#include "nlselab/evolve.hpp"
#include "nlselab/field_gen.hpp"
#include "nlselab/fractal_motion.hpp"
#include "nlselab/model.hpp"
#include "nlselab/soliton.hpp"

namespace nlselab {

namespace {

using json = nlohmann::ordered_json;
constexpr Complex kImag{0.0, 1.0};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---- config access with strict unknown-key rejection --------------------

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!obj.is_object()) {
    throw ConfigError("config: '" + where + "' must be an object");
  }
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("config: unknown key '" + item.key() + "' in '" + where + "'");
    }
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: bad value for '" + key + "': " + e.what());
  }
}

Complex get_complex(const json& obj, const std::string& key, Complex fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number()) return Complex{v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return Complex{v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError("config: '" + key + "' must be a number or [re, im]");
}

// ---- shared blocks -------------------------------------------------------

Grid1D parse_grid(const json& config) {
  double length = 16.0 * M_PI;
  int n = 256;
  if (config.contains("grid")) {
    const json& g = config.at("grid");
    reject_unknown_keys(g, {"L", "n"}, "grid");
    length = get_or<double>(g, "L", length);
    n = get_or<int>(g, "n", n);
  }
  try {
    return make_grid(length, n);
  } catch (const InvalidArgumentError& e) {
    throw ConfigError(std::string("config: grid: ") + e.what());
  }
}

ModelSpec parse_model(const json& config, const Grid1D& grid) {
  ModelSpec model;
  if (!config.contains("model")) return model;
  const json& m = config.at("model");
  reject_unknown_keys(m,
                      {"variant", "m", "hbar0", "alpha", "beta", "a", "b", "g",
                       "hbar_second", "correction_sign", "potential", "scheme",
                       "log_floor"},
                      "model");
  const std::string name = get_or<std::string>(m, "variant", "linear");
  const auto variant = variant_from_name(name);
  if (!variant) throw ConfigError("config: unknown model variant '" + name + "'");
  model.variant = *variant;
  model.m = get_or<double>(m, "m", model.m);
  model.hbar0 = get_or<double>(m, "hbar0", model.hbar0);
  model.alpha = get_or<double>(m, "alpha", model.alpha);
  model.beta = get_or<double>(m, "beta", model.beta);
  model.a = get_or<double>(m, "a", model.a);
  model.b = get_or<double>(m, "b", model.b);
  model.g = get_or<double>(m, "g", model.g);
  model.hbar_second = get_or<double>(m, "hbar_second", model.hbar_second);
  model.correction_sign = get_or<int>(m, "correction_sign", model.correction_sign);
  model.log_floor = get_or<double>(m, "log_floor", model.log_floor);
  const std::string scheme = get_or<std::string>(m, "scheme", "spectral");
  if (scheme == "spectral") {
    model.scheme = Scheme::spectral;
  } else if (scheme == "central-2") {
    model.scheme = Scheme::central2;
  } else {
    throw ConfigError("config: scheme must be 'spectral' or 'central-2'");
  }
  if (m.contains("potential")) {
    model.potential = m.at("potential").get<std::vector<double>>();
  }
  try {
    model.validate(grid);
  } catch (const InvalidArgumentError& e) {
    throw ConfigError(std::string("config: model: ") + e.what());
  }
  return model;
}

struct RunBlock {
  double dt = 0.01;
  double T = 1.0;
  long record_every = 10;
  uint64_t seed = 12345;
  Integrator integrator = Integrator::rk4;
  json tolerances = json::object();
};

RunBlock parse_run(const json& config) {
  RunBlock run;
  if (!config.contains("run")) return run;
  const json& r = config.at("run");
  reject_unknown_keys(r, {"dt", "T", "record_every", "seed", "integrator", "tolerances"},
                      "run");
  run.dt = get_or<double>(r, "dt", run.dt);
  run.T = get_or<double>(r, "T", run.T);
  run.record_every = get_or<long>(r, "record_every", run.record_every);
  run.seed = get_or<uint64_t>(r, "seed", run.seed);
  const std::string integ = get_or<std::string>(r, "integrator", "rk4");
  if (integ == "rk4") {
    run.integrator = Integrator::rk4;
  } else if (integ == "split-step") {
    run.integrator = Integrator::split_step;
  } else {
    throw ConfigError("config: integrator must be 'rk4' or 'split-step'");
  }
  if (r.contains("tolerances")) {
    run.tolerances = r.at("tolerances");
    if (!run.tolerances.is_object()) {
      throw ConfigError("config: run.tolerances must be an object");
    }
  }
  return run;
}

double tolerance_or(const RunBlock& run, const std::string& key, double fallback) {
  return get_or<double>(run.tolerances, key, fallback);
}

// ---- outcome assembly ----------------------------------------------------

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool at_most = true;  // value <= threshold (otherwise value >= threshold)
  bool pass = false;
};

Check check_le(std::string name, double value, double threshold) {
  Check c{std::move(name), value, threshold, true, false};
  c.pass = std::isfinite(value) && value <= threshold;
  return c;
}

Check check_ge(std::string name, double value, double threshold) {
  Check c{std::move(name), value, threshold, false, false};
  c.pass = std::isfinite(value) && value >= threshold;
  return c;
}

struct Outcome {
  json results = json::object();
  std::vector<Check> checks;
  std::vector<std::string> series_header;
  std::vector<std::vector<std::string>> series_rows;
  std::vector<std::pair<std::string, WaveField>> snapshots;  // file stem -> field
};

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

struct Context {
  json config;
  Grid1D grid;
  ModelSpec model;
  RunBlock run;
  json params = json::object();
};

// ---- experiments ---------------------------------------------------------

Outcome exp_dispersion(const Context& ctx) {
  reject_unknown_keys(ctx.params, {"q", "amplitude"}, "params");
  const int q = get_or<int>(ctx.params, "q", 2);
  const Complex amplitude = get_complex(ctx.params, "amplitude", Complex{1.0, 0.0});

  DispersionResult r = measure_dispersion(ctx.model, ctx.grid, q, amplitude,
                                          ctx.run.dt, ctx.run.T, ctx.run.integrator);

  Outcome out;
  out.results["q"] = r.q;
  out.results["k"] = r.k;
  out.results["omega_measured"] = r.omega;
  out.results["omega_predicted"] = r.predicted.omega;
  out.results["growth_rate"] = r.growth_rate;
  out.results["E_measured"] = complex_json(r.energy_measured);
  out.results["E_predicted_label"] = r.predicted.energy_label;
  out.results["E_predicted_chain"] = complex_json(r.predicted.energy_chain);
  out.results["E_chain_measured"] = complex_json(r.energy_chain_measured);
  out.results["deviation"] = r.deviation;
  out.results["omega_deviation"] = r.omega_deviation;
  out.results["shape_deviation"] = r.shape_deviation;

  out.checks.push_back(check_le("omega_relative_deviation", r.omega_deviation,
                                tolerance_or(ctx.run, "omega_rel", 1e-6)));
  out.checks.push_back(check_le("amplitude_growth_rate", std::abs(r.growth_rate),
                                tolerance_or(ctx.run, "growth_abs", 1e-8)));

  out.series_header = {"q", "k", "omega_measured", "omega_predicted",
                       "growth_rate", "deviation"};
  out.series_rows.push_back({fmt17(r.q), fmt17(r.k), fmt17(r.omega),
                             fmt17(r.predicted.omega), fmt17(r.growth_rate),
                             fmt17(r.deviation)});
  return out;
}

WaveField parse_initial(const Context& ctx, const json& init) {
  reject_unknown_keys(init,
                      {"type", "q", "amplitude", "center", "sigma", "carrier_q",
                       "q_max", "amp", "seed"},
                      "params.initial");
  const std::string type = get_or<std::string>(init, "type", "plane-wave");
  const Complex amplitude = get_complex(init, "amplitude", Complex{1.0, 0.0});
  if (type == "plane-wave") {
    return plane_wave(ctx.grid, get_or<int>(init, "q", 1), amplitude);
  }
  if (type == "gaussian") {
    const double center = get_or<double>(init, "center", 0.5 * ctx.grid.length);
    const double sigma = get_or<double>(init, "sigma", ctx.grid.length / 16.0);
    return gaussian_bump(ctx.grid, amplitude, center, sigma,
                         get_or<int>(init, "carrier_q", 0));
  }
  if (type == "nodefree") {
    return random_nodefree(ctx.grid, get_or<int>(init, "q_max", 8),
                           get_or<uint64_t>(init, "seed", ctx.run.seed),
                           get_or<double>(init, "amp", 0.5));
  }
  if (type == "gausson") {
    GaussonParams p;
    p.amplitude = amplitude;
    p.width_B = gausson_width_prediction(ctx.model.m, ctx.model.hbar0, ctx.model.b);
    p.offset_d = get_or<double>(init, "center", -0.5 * ctx.grid.length);
    p.carrier_k = ctx.grid.wavenumber(get_or<int>(init, "carrier_q", 0));
    p.omega = gausson_omega_prediction(ctx.model.m, ctx.model.hbar0, ctx.model.b,
                                       p.carrier_k, amplitude);
    return gausson_field(ctx.grid, p, ctx.model.m, ctx.model.hbar0, 0.0);
  }
  throw ConfigError("config: unknown initial condition type '" + type + "'");
}

Outcome exp_evolve(const Context& ctx) {
  reject_unknown_keys(ctx.params, {"initial"}, "params");
  const json init =
      ctx.params.contains("initial") ? ctx.params.at("initial") : json::object();
  WaveField psi0 = parse_initial(ctx, init);

  EvolveConfig config;
  config.dt = ctx.run.dt;
  config.n_steps = std::max<long>(1, std::lround(ctx.run.T / ctx.run.dt));
  config.record_every = ctx.run.record_every;
  config.integrator = ctx.run.integrator;

  EvolveResult result = evolve(ctx.model, psi0, config);

  Outcome out;
  const double t_total = config.n_steps * config.dt;
  const double norm0 = result.records.front().norm2;
  double norm_drift = 0.0;
  double rate_gap = 0.0;
  int floored_max = 0;
  for (size_t i = 0; i < result.records.size(); ++i) {
    const auto& rec = result.records[i];
    norm_drift = std::max(norm_drift, std::abs(rec.norm2 - norm0));
    floored_max = std::max(floored_max, rec.floored_count);
    if (i > 0 && i + 1 < result.records.size()) {  // central-difference records
      rate_gap = std::max(rate_gap,
                          std::abs(rec.norm_rate_numeric - rec.norm_rate_analytic));
    }
  }

  out.results["n_steps"] = config.n_steps;
  out.results["t_final"] = t_total;
  out.results["norm2_initial"] = norm0;
  out.results["norm2_final"] = result.records.back().norm2;
  out.results["norm_drift_per_unit_time"] = norm_drift / t_total;
  out.results["norm_rate_consistency"] = rate_gap;
  out.results["max_floored_nodes"] = floored_max;
  out.results["E_qm_final"] = complex_json(result.records.back().energy_qm);
  out.results["E_ft_final"] = complex_json(result.records.back().energy_ft);

  const bool hermitian =
      !(ctx.model.variant == Variant::fractal && ctx.model.beta != 0.0);
  if (hermitian || ctx.run.tolerances.contains("norm_drift")) {
    out.checks.push_back(check_le("norm_drift_per_unit_time", norm_drift / t_total,
                                  tolerance_or(ctx.run, "norm_drift", 1e-9)));
  }
  if (ctx.run.tolerances.contains("norm_rate")) {
    out.checks.push_back(check_le("norm_rate_consistency", rate_gap,
                                  tolerance_or(ctx.run, "norm_rate", 1e-6)));
  }

  out.series_header = {"t",          "norm2",           "e_qm_re",
                       "e_qm_im",    "e_ft_re",         "e_ft_im",
                       "norm_rate_numeric", "norm_rate_analytic", "floored"};
  for (const auto& rec : result.records) {
    out.series_rows.push_back({fmt17(rec.t), fmt17(rec.norm2),
                               fmt17(rec.energy_qm.real()), fmt17(rec.energy_qm.imag()),
                               fmt17(rec.energy_ft.real()), fmt17(rec.energy_ft.imag()),
                               fmt17(rec.norm_rate_numeric),
                               fmt17(rec.norm_rate_analytic),
                               std::to_string(rec.floored_count)});
  }
  out.snapshots.emplace_back("field_t0", psi0);
  out.snapshots.emplace_back("field_t" + std::to_string(config.n_steps), result.psi);
  return out;
}

Outcome exp_energy_functionals(const Context& ctx) {
  reject_unknown_keys(ctx.params, {"n_fields", "q_max", "amp"}, "params");
  const int n_fields = get_or<int>(ctx.params, "n_fields", 10);
  const int q_max = get_or<int>(ctx.params, "q_max", 8);
  const double amp = get_or<double>(ctx.params, "amp", 0.5);

  Outcome out;
  out.series_header = {"field",   "e_qm_re", "e_qm_im", "e_ft_re",
                       "e_ft_im", "gap_re",  "gap_im",  "expected_re"};
  double worst = 0.0;
  for (int i = 0; i < n_fields; ++i) {
    WaveField psi = random_nodefree(ctx.grid, q_max, ctx.run.seed + i, amp);
    const Complex eqm = energy_qm(ctx.model, psi);
    const Complex eft = energy_ft(ctx.model, psi);
    const Complex gap = eft - eqm;

    Complex expected{0.0, 0.0};
    switch (ctx.model.variant) {
      case Variant::log_birula:
      case Variant::hydro_combined:
        expected = ctx.model.b * norm_squared(psi);
        break;
      case Variant::cubic_gp: {
        double quartic = 0.0;
        for (int j = 0; j < psi.size(); ++j) quartic += std::norm(psi[j]) * std::norm(psi[j]);
        expected = -0.5 * ctx.model.g * quartic * psi.grid.dx;
        break;
      }
      default:
        break;
    }
    worst = std::max(worst, std::abs(gap - expected));
    out.series_rows.push_back({std::to_string(i), fmt17(eqm.real()), fmt17(eqm.imag()),
                               fmt17(eft.real()), fmt17(eft.imag()), fmt17(gap.real()),
                               fmt17(gap.imag()), fmt17(expected.real())});
  }
  out.results["n_fields"] = n_fields;
  out.results["max_gap_error"] = worst;
  const double fallback = ctx.model.variant == Variant::fractal ? 1e-12 : 1e-8;
  out.checks.push_back(
      check_le("energy_gap_error", worst, tolerance_or(ctx.run, "gap", fallback)));
  return out;
}

Outcome exp_homogeneity(const Context& ctx) {
  reject_unknown_keys(ctx.params, {"lambdas", "q_max", "amp"}, "params");
  std::vector<Complex> lambdas = {{2.0, 0.0}, {0.0, 1.0}, {0.5, 0.3}};
  if (ctx.params.contains("lambdas")) {
    lambdas.clear();
    for (const auto& l : ctx.params.at("lambdas")) {
      if (l.is_number()) {
        lambdas.emplace_back(l.get<double>(), 0.0);
      } else {
        lambdas.emplace_back(l.at(0).get<double>(), l.at(1).get<double>());
      }
    }
  }
  WaveField psi = random_nodefree(ctx.grid, get_or<int>(ctx.params, "q_max", 8),
                                  ctx.run.seed, get_or<double>(ctx.params, "amp", 0.5));

  const bool logarithmic = ctx.model.variant == Variant::log_birula ||
                           ctx.model.variant == Variant::hydro_combined;
  const bool cubic = ctx.model.variant == Variant::cubic_gp;

  Outcome out;
  out.series_header = {"lambda_re", "lambda_im", "defect_max", "closed_form_error"};
  double worst_defect = 0.0;
  double worst_closed = 0.0;
  for (const Complex lambda : lambdas) {
    WaveField defect = homogeneity_defect(ctx.model, psi, lambda);
    double defect_max = defect.max_abs();
    worst_defect = std::max(worst_defect, defect_max);

    double closed_err = 0.0;
    if (logarithmic || cubic) {
      const Complex i_h0 = kImag * ctx.model.hbar0;
      for (int j = 0; j < psi.size(); ++j) {
        Complex expected{0.0, 0.0};
        if (logarithmic) {
          expected = -(ctx.model.b * std::log(std::norm(lambda)) / i_h0) * lambda * psi[j];
        } else {
          expected = (ctx.model.g * (std::norm(lambda) - 1.0) / i_h0) * lambda *
                     std::norm(psi[j]) * psi[j];
        }
        closed_err = std::max(closed_err, std::abs(defect[j] - expected));
      }
      worst_closed = std::max(worst_closed, closed_err);
    }
    out.series_rows.push_back({fmt17(lambda.real()), fmt17(lambda.imag()),
                               fmt17(defect_max), fmt17(closed_err)});
  }
  out.results["max_defect"] = worst_defect;
  out.results["max_closed_form_error"] = worst_closed;
  const double tol = tolerance_or(ctx.run, "defect", 1e-10);
  if (logarithmic || cubic) {
    out.checks.push_back(check_le("closed_form_defect_error", worst_closed, tol));
  } else {
    out.checks.push_back(check_le("homogeneity_defect", worst_defect, tol));
  }
  return out;
}

Outcome exp_weinberg(const Context& ctx) {
  reject_unknown_keys(ctx.params, {"eps", "q_max", "amp", "drop_log_compensation"},
                      "params");
  const double eps = get_or<double>(ctx.params, "eps", 1e-6);
  WaveField psi = random_nodefree(ctx.grid, get_or<int>(ctx.params, "q_max", 6),
                                  ctx.run.seed, get_or<double>(ctx.params, "amp", 0.5));
  WeinbergResult r = weinberg_check(ctx.model, psi, eps,
                                    get_or<bool>(ctx.params, "drop_log_compensation", false));

  Outcome out;
  out.results["max_rel_deviation"] = r.max_rel_deviation;
  out.results["eps"] = eps;
  out.results["eps_in_range"] = r.eps_in_range;
  if (ctx.model.variant == Variant::log_birula) {
    WeinbergResult broken = weinberg_check(ctx.model, psi, eps, true);
    out.results["deviation_without_compensation"] = broken.max_rel_deviation;
  }
  out.checks.push_back(check_le("weinberg_deviation", r.max_rel_deviation,
                                tolerance_or(ctx.run, "deviation", 1e-5)));
  out.series_header = {"eps", "max_rel_deviation"};
  out.series_rows.push_back({fmt17(eps), fmt17(r.max_rel_deviation)});
  return out;
}

Outcome exp_soliton_gausson(const Context& ctx) {
  reject_unknown_keys(ctx.params, {"amplitude", "carrier_q", "initial_width"},
                      "params");
  if (ctx.model.variant != Variant::log_birula) {
    throw ConfigError("config: soliton-gausson requires the log-birula model");
  }
  const Complex amplitude = get_complex(ctx.params, "amplitude", Complex{0.5, 0.0});
  const int carrier_q = get_or<int>(ctx.params, "carrier_q", 4);
  const double b_init = get_or<double>(ctx.params, "initial_width", 1.0);

  GaussonFit fit = fit_gausson(ctx.model, ctx.grid, amplitude, carrier_q, b_init);
  const double b_pred =
      gausson_width_prediction(ctx.model.m, ctx.model.hbar0, ctx.model.b);
  const double omega_pred = gausson_omega_prediction(
      ctx.model.m, ctx.model.hbar0, ctx.model.b, fit.params.carrier_k, amplitude);

  SolitonProfile prof =
      gausson_profile(ctx.grid, fit.params, ctx.model.m, ctx.model.hbar0);
  const double t_samples[] = {0.0};
  const double pde_residual = ansatz_residual(ctx.model, prof, t_samples);

  Outcome out;
  out.results["width_B_fit"] = fit.params.width_B;
  out.results["width_B_predicted"] = b_pred;
  out.results["omega_fit"] = fit.params.omega;
  out.results["omega_predicted"] = omega_pred;
  out.results["fit_residual_l2"] = fit.residual_norm;
  out.results["pde_residual"] = pde_residual;
  out.results["converged"] = fit.converged;
  out.results["iterations"] = fit.iterations;

  out.checks.push_back(check_le("width_error", std::abs(fit.params.width_B - b_pred),
                                tolerance_or(ctx.run, "width", 1e-6)));
  out.checks.push_back(check_le("pde_residual", pde_residual,
                                tolerance_or(ctx.run, "residual", 1e-8)));

  out.series_header = {"y", "F", "G"};
  for (size_t j = 0; j < prof.y.size(); ++j) {
    out.series_rows.push_back({fmt17(prof.y[j]), fmt17(prof.F[j]), fmt17(prof.G[j])});
  }
  return out;
}

Outcome exp_soliton_kinematic(const Context& ctx) {
  reject_unknown_keys(ctx.params, {"a", "p", "E", "y_max"}, "params");
  const double a = get_or<double>(ctx.params, "a", 1.0);
  const double p = get_or<double>(ctx.params, "p", 1.0);
  const double energy = get_or<double>(ctx.params, "E", 0.5);
  const double y_max = get_or<double>(ctx.params, "y_max", 3.0);

  SolitonProfile prof = shoot_kinematic_profile(ctx.model.m, ctx.model.hbar0, a,
                                                energy, p, y_max);
  const double c = 1.0 + a / ctx.model.m;
  const double kappa = (2.0 * ctx.model.m * energy - p * p * c) /
                       (ctx.model.hbar0 * ctx.model.hbar0);

  double riccati_err = 0.0;
  const bool compact = kappa < 0.0;
  const double root = compact ? std::sqrt(-kappa * c) : 0.0;
  const double y_star = compact ? 0.5 * M_PI / root : 0.0;
  auto closed_form = [&](double y) {
    if (!compact) return 1.0;
    if (std::abs(y) >= y_star) return 0.0;
    return std::pow(std::cos(root * y), 1.0 / c);
  };

  Outcome out;
  out.series_header = {"y", "F", "F_closed"};
  for (size_t j = 0; j < prof.y.size(); ++j) {
    const double fc = closed_form(prof.y[j]);
    if (compact) riccati_err = std::max(riccati_err, std::abs(prof.F[j] - fc));
    out.series_rows.push_back({fmt17(prof.y[j]), fmt17(prof.F[j]), fmt17(fc)});
  }

  out.results["kappa"] = kappa;
  out.results["c"] = c;
  out.results["V"] = prof.V;
  out.results["V_expected"] = imaginary_part_speed_check(a, ctx.model.m, p);
  out.results["first_zero"] = prof.first_zero;
  out.results["ode_residual"] = prof.residual_norm;
  out.results["non_localized"] = prof.non_localized;
  if (compact) out.results["riccati_max_error"] = riccati_err;

  if (compact) {
    out.checks.push_back(check_le("riccati_max_error", riccati_err,
                                  tolerance_or(ctx.run, "riccati", 1e-6)));
  }
  out.checks.push_back(check_le(
      "speed_law",
      std::abs(prof.V - imaginary_part_speed_check(a, ctx.model.m, p)), 1e-15));
  return out;
}

Outcome exp_soliton_fractal(const Context& ctx) {
  reject_unknown_keys(ctx.params,
                      {"p", "E", "envelope_q", "g_seed", "beta_steps", "max_iter"},
                      "params");
  if (ctx.model.variant != Variant::fractal) {
    throw ConfigError("config: soliton-fractal requires the fractal model");
  }
  const double p = get_or<double>(ctx.params, "p", 0.5);
  const int envelope_q = get_or<int>(ctx.params, "envelope_q", 2);
  const double q_k = ctx.grid.wavenumber(envelope_q);
  const double default_energy =
      p * p / (2.0 * ctx.model.m) +
      ctx.model.alpha * ctx.model.alpha * q_k * q_k / (2.0 * ctx.model.m);
  const double energy = get_or<double>(ctx.params, "E", default_energy);
  const double g_seed = get_or<double>(ctx.params, "g_seed", 0.1);
  const int max_iter = get_or<int>(ctx.params, "max_iter", 400);
  const int n_steps_default = 4;

  std::vector<double> betas;
  if (ctx.params.contains("beta_steps")) {
    betas = ctx.params.at("beta_steps").get<std::vector<double>>();
  } else {
    for (int i = 1; i <= n_steps_default; ++i) {
      betas.push_back(ctx.model.beta * i / n_steps_default);
    }
  }

  // beta = 0 member of the traveling family: A = cos(q y), V = p/m.
  SolitonProfile guess;
  guess.periodic_envelope = true;
  guess.p = p;
  guess.E = energy;
  guess.V = p / ctx.model.m;
  guess.y.resize(static_cast<size_t>(ctx.grid.n));
  guess.F.resize(static_cast<size_t>(ctx.grid.n));
  guess.G.resize(static_cast<size_t>(ctx.grid.n));
  for (int j = 0; j < ctx.grid.n; ++j) {
    const double y = ctx.grid.x(j);
    guess.y[static_cast<size_t>(j)] = y;
    guess.F[static_cast<size_t>(j)] = std::cos(q_k * y);
    guess.G[static_cast<size_t>(j)] = g_seed * std::sin(q_k * y);
  }

  const double tol = tolerance_or(ctx.run, "residual", 1e-6);
  ModelSpec stage = ctx.model;
  SolitonProfile prof = guess;
  for (double beta : betas) {
    stage.beta = beta;
    prof = collocation_solve_fractal(stage, p, energy, prof, tol / 10.0, max_iter);
  }

  double max_g = 0.0;
  for (double g : prof.G) max_g = std::max(max_g, std::abs(g));

  Outcome out;
  out.results["beta_final"] = betas.empty() ? 0.0 : betas.back();
  out.results["residual_rms"] = prof.residual_norm;
  out.results["max_abs_G"] = max_g;
  out.results["V"] = prof.V;
  out.results["iterations_last_stage"] = prof.iterations;
  out.results["converged"] = prof.converged;

  out.checks.push_back(check_le("residual_rms", prof.residual_norm, tol));
  out.checks.push_back(
      check_ge("max_abs_G", max_g, tolerance_or(ctx.run, "min_g", 1e-3)));

  out.series_header = {"y", "F", "G"};
  for (size_t j = 0; j < prof.y.size(); ++j) {
    out.series_rows.push_back({fmt17(prof.y[j]), fmt17(prof.F[j]), fmt17(prof.G[j])});
  }
  return out;
}

Outcome exp_linearize(const Context& ctx) {
  reject_unknown_keys(ctx.params, {"sigma", "amplitude"}, "params");
  if (ctx.model.variant != Variant::nabla2log) {
    throw ConfigError("config: linearize requires the nabla2log model");
  }
  const double sigma = get_or<double>(ctx.params, "sigma", 0.85);
  const Complex amplitude = get_complex(ctx.params, "amplitude", Complex{1.0, 0.0});

  WaveField psi = gaussian_bump(ctx.grid, amplitude, 0.5 * ctx.grid.length, sigma, 0);
  const long n_steps = std::max<long>(2, std::lround(ctx.run.T / ctx.run.dt));

  WaveField prev = psi;
  for (long step = 1; step <= n_steps + 1; ++step) {
    WaveField next = step_rk4(ctx.model, psi, ctx.run.dt);
    if (step <= n_steps) {
      if (step == n_steps) prev = psi;  // psi(T - dt)
      psi = next;
      continue;
    }
    // psi holds psi(T), next holds psi(T + dt).
    auto mapped_m = linearization_map(prev, ctx.model.hbar0, ctx.model.hbar_second);
    auto mapped_0 = linearization_map(psi, ctx.model.hbar0, ctx.model.hbar_second);
    auto mapped_p = linearization_map(next, ctx.model.hbar0, ctx.model.hbar_second);

    ModelSpec linear;
    linear.variant = Variant::linear;
    linear.m = ctx.model.m;
    linear.hbar0 = ctx.model.hbar_second;
    ModelOutput h2 = time_derivative(linear, mapped_0.mapped);

    double num = 0.0, den = 0.0;
    for (int j = 0; j < psi.size(); ++j) {
      const Complex dt_num =
          (mapped_p.mapped[j] - mapped_m.mapped[j]) / (2.0 * ctx.run.dt);
      num += std::norm(kImag * ctx.model.hbar_second * dt_num - h2.h_action[j]);
      den += std::norm(h2.h_action[j]);
    }
    const double residual = std::sqrt(num / den);

    auto forward = linearization_map(psi, ctx.model.hbar0, ctx.model.hbar_second);
    auto back = linearization_map(forward.mapped, ctx.model.hbar_second, ctx.model.hbar0);
    const double roundtrip = max_abs_diff(back.mapped, psi);

    Outcome out;
    out.results["hbar_second"] = ctx.model.hbar_second;
    out.results["correction_sign"] = ctx.model.correction_sign;
    out.results["mapped_residual"] = residual;
    out.results["roundtrip_error"] = roundtrip;
    out.results["winding"] = mapped_0.winding;
    out.checks.push_back(check_le("mapped_residual", residual,
                                  tolerance_or(ctx.run, "residual", 1e-4)));
    out.checks.push_back(check_le("roundtrip_error", roundtrip,
                                  tolerance_or(ctx.run, "roundtrip", 1e-10)));
    out.series_header = {"t_final", "mapped_residual", "roundtrip_error"};
    out.series_rows.push_back(
        {fmt17(n_steps * ctx.run.dt), fmt17(residual), fmt17(roundtrip)});
    out.snapshots.emplace_back("field_t" + std::to_string(n_steps), psi);
    return out;
  }
  throw Error("linearize: unreachable");
}

Outcome exp_wiener_scaling(const Context& ctx) {
  reject_unknown_keys(ctx.params,
                      {"diffusion", "dt_min", "dt_max", "n_dt", "n_samples"},
                      "params");
  const double diffusion = get_or<double>(ctx.params, "diffusion", 0.5);
  const double dt_min = get_or<double>(ctx.params, "dt_min", 1e-3);
  const double dt_max = get_or<double>(ctx.params, "dt_max", 1e-1);
  const int n_dt = get_or<int>(ctx.params, "n_dt", 7);
  const long n_samples = get_or<long>(ctx.params, "n_samples", 100000);

  std::vector<double> dt_list;
  for (int i = 0; i < n_dt; ++i) {
    dt_list.push_back(dt_min * std::pow(dt_max / dt_min,
                                        n_dt > 1 ? static_cast<double>(i) / (n_dt - 1)
                                                 : 0.0));
  }
  ScalingEstimate est =
      wiener_velocity_scaling(diffusion, dt_list, n_samples, ctx.run.seed);

  Outcome out;
  out.results["slope"] = est.slope;
  out.results["half_width"] = est.half_width;
  out.results["samples_per_dt"] = est.samples_per_dt;
  out.checks.push_back(check_le("slope_error", std::abs(est.slope + 1.0),
                                tolerance_or(ctx.run, "slope", 0.02)));
  out.series_header = {"dt", "mean_squared_velocity"};
  for (const auto& [dt, msv] : est.mean_squared_velocity) {
    out.series_rows.push_back({fmt17(dt), fmt17(msv)});
  }
  return out;
}

Outcome exp_fractal_function(const Context& ctx) {
  reject_unknown_keys(ctx.params,
                      {"f0", "zeta", "lambda", "b_rg", "eps_min", "eps_max", "n_eps"},
                      "params");
  FractalFunctionParams params;
  params.f0 = get_or<double>(ctx.params, "f0", 1.0);
  params.zeta = get_or<double>(ctx.params, "zeta", 1.0);
  params.lambda = get_or<double>(ctx.params, "lambda", 1.0);
  params.b_rg = get_or<double>(ctx.params, "b_rg", -1.0);
  const double eps_min = get_or<double>(ctx.params, "eps_min", 1e-3 * params.lambda);
  const double eps_max = get_or<double>(ctx.params, "eps_max", 1e3 * params.lambda);
  const int n_eps = get_or<int>(ctx.params, "n_eps", 13);

  Outcome out;
  out.series_header = {"epsilon", "value", "fluctuation_ratio", "regime"};
  const double x_samples[] = {0.0};

  std::vector<double> log_scale, log_excess;
  for (int i = 0; i < n_eps; ++i) {
    const double eps =
        eps_min * std::pow(eps_max / eps_min,
                           n_eps > 1 ? static_cast<double>(i) / (n_eps - 1) : 0.0);
    FractalFunctionResult r = fractal_function_eval(x_samples, eps, params);
    out.series_rows.push_back({fmt17(eps), fmt17(r.values[0]),
                               fmt17(r.fluctuation_ratio),
                               regime_name(r.regime)});
    if (r.regime == ScalingRegime::scale_dependent) {
      log_scale.push_back(std::log(params.lambda / eps));
      log_excess.push_back(std::log(std::abs(r.values[0] / params.f0 - 1.0)));
    }
  }

  double slope = 0.0;
  if (log_scale.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(log_scale.size());
    for (size_t i = 0; i < log_scale.size(); ++i) {
      sx += log_scale[i];
      sy += log_excess[i];
      sxx += log_scale[i] * log_scale[i];
      sxy += log_scale[i] * log_excess[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  out.results["deep_regime_points"] = log_scale.size();
  out.results["deep_regime_slope"] = slope;
  out.results["expected_slope"] = -params.b_rg;
  if (log_scale.size() >= 2) {
    out.checks.push_back(check_le("slope_error", std::abs(slope + params.b_rg),
                                  tolerance_or(ctx.run, "slope", 1e-3)));
  }
  return out;
}

// ---- output + dispatch ---------------------------------------------------

void write_series(const std::filesystem::path& path, const Outcome& outcome) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (size_t i = 0; i < outcome.series_header.size(); ++i) {
    out << (i ? "," : "") << outcome.series_header[i];
  }
  out << "\n";
  for (const auto& row : outcome.series_rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void write_field(const std::filesystem::path& path, const WaveField& f) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "x,re_psi,im_psi,abs2_psi\n";
  for (int j = 0; j < f.size(); ++j) {
    out << fmt17(f.grid.x(j)) << ',' << fmt17(f[j].real()) << ','
        << fmt17(f[j].imag()) << ',' << fmt17(std::norm(f[j])) << "\n";
  }
}

using ExperimentFn = Outcome (*)(const Context&);

const std::map<std::string, std::pair<std::string, ExperimentFn>>& registry() {
  static const std::map<std::string, std::pair<std::string, ExperimentFn>> r = {
      {"dispersion",
       {"Plane-wave frequency and growth rate against the closed-form "
        "energy-momentum relation.",
        exp_dispersion}},
      {"energy-functionals",
       {"Field-theory vs expectation-value energy gap over random fields.",
        exp_energy_functionals}},
      {"evolve",
       {"Time integration with norm and energy diagnostics plus field snapshots.",
        exp_evolve}},
      {"fractal-function",
       {"Two-regime scale dependence of the fractal-function form.",
        exp_fractal_function}},
      {"homogeneity",
       {"Degree-one homogeneity defect under psi -> lambda psi.", exp_homogeneity}},
      {"linearize",
       {"Wavefunction redefinition mapping the log-Laplacian correction onto "
        "the linear equation.",
        exp_linearize}},
      {"soliton-fractal",
       {"Collocation traveling wave of the complex-diffusion equation.",
        exp_soliton_fractal}},
      {"soliton-gausson",
       {"Gausson width/frequency fit and residual for the logarithmic equation.",
        exp_soliton_gausson}},
      {"soliton-kinematic",
       {"Shooting profile of the kinematic-pressure equation against its "
        "closed form.",
        exp_soliton_kinematic}},
      {"weinberg",
       {"Functional-derivative consistency of the Hamiltonian densities.",
        exp_weinberg}},
      {"wiener-scaling",
       {"Mean squared velocity scaling of Wiener increments.", exp_wiener_scaling}},
  };
  return r;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& experiment_catalog() {
  static const std::vector<std::pair<std::string, std::string>> catalog = [] {
    std::vector<std::pair<std::string, std::string>> c;
    for (const auto& [name, entry] : registry()) c.emplace_back(name, entry.first);
    return c;
  }();
  return catalog;
}

int run_experiment(const std::filesystem::path& config_path,
                   const RunOptions& options) {
  json config;
  std::string experiment_name;
  std::filesystem::path outdir;
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("config: cannot open " + config_path.string());
    try {
      config = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("config: parse failure: " + std::string(e.what()));
    }
    reject_unknown_keys(config, {"experiment", "grid", "model", "run", "params", "output"},
                        "(top level)");
    if (!config.contains("experiment")) {
      throw ConfigError("config: missing required key 'experiment'");
    }
    experiment_name = config.at("experiment").get<std::string>();
    if (!registry().count(experiment_name)) {
      throw ConfigError("config: unknown experiment '" + experiment_name + "'");
    }

    std::string dir = ".";
    if (const char* env = std::getenv("NLSE_LAB_OUT")) dir = env;
    std::vector<std::string> formats = {"json", "csv"};
    if (config.contains("output")) {
      const json& o = config.at("output");
      reject_unknown_keys(o, {"directory", "formats"}, "output");
      dir = get_or<std::string>(o, "directory", dir);
      if (o.contains("formats")) formats = o.at("formats").get<std::vector<std::string>>();
      for (const auto& f : formats) {
        if (f != "json" && f != "csv") {
          throw ConfigError("config: output.formats entries must be 'json' or 'csv'");
        }
      }
    }
    if (options.output_dir) dir = options.output_dir->string();
    outdir = dir;

    Context ctx;
    ctx.config = config;
    ctx.grid = parse_grid(config);
    ctx.model = parse_model(config, ctx.grid);
    ctx.run = parse_run(config);
    if (options.seed) ctx.run.seed = *options.seed;
    if (config.contains("params")) ctx.params = config.at("params");

    std::filesystem::create_directories(outdir);

    json summary;
    summary["experiment"] = experiment_name;
    summary["parameters"] = config;
    if (options.seed) summary["parameters"]["run"]["seed"] = *options.seed;

    int status = 0;
    const bool csv =
        std::find(formats.begin(), formats.end(), "csv") != formats.end();
    try {
      Outcome outcome = registry().at(experiment_name).second(ctx);
      summary["results"] = outcome.results;
      json checks = json::array();
      bool all_pass = true;
      for (const auto& c : outcome.checks) {
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"threshold", c.threshold},
                          {"comparison", c.at_most ? "<=" : ">="},
                          {"pass", c.pass}});
        all_pass = all_pass && c.pass;
      }
      summary["checks"] = checks;
      summary["pass"] = all_pass;
      summary["error"] = nullptr;
      status = all_pass ? 0 : 1;

      if (csv && !outcome.series_header.empty()) {
        write_series(outdir / "series.csv", outcome);
      }
      if (csv) {
        for (const auto& [stem, field] : outcome.snapshots) {
          write_field(outdir / (stem + ".csv"), field);
        }
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      summary["results"] = json::object();
      summary["checks"] = json::array();
      summary["pass"] = false;
      summary["error"] = e.what();
      status = 3;
    }

    summary["meta"] = {{"artifact_version", kArtifactVersion},
                       {"timestamp", iso_timestamp()}};
    std::ofstream out(outdir / "summary.json");
    if (!out) throw ConfigError("cannot write " + (outdir / "summary.json").string());
    out << summary.dump(2) << "\n";

    if (!options.quiet) {
      std::cout << experiment_name << ": "
                << (status == 0 ? "pass" : status == 3 ? "numerical failure"
                                                       : "checks failed")
                << " (summary " << (outdir / "summary.json").string() << ")\n";
    }
    return status;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace nlselab
