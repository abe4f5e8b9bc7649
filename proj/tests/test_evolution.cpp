#include <cmath>

#include "doctest.h"
#include "nlselab/analysis.hpp"
#include "nlselab/errors.hpp"
#include "nlselab/evolve.hpp"
#include "test_util.hpp"

using namespace nlselab;
using testutil::kI;

TEST_CASE("rk4 reproduces the linear plane-wave phase") {
  Grid1D g = testutil::small_grid();
  ModelSpec model = testutil::linear_model();
  WaveField psi = plane_wave(g, 1, 1.0);

  const double dt = 0.004;
  const int steps = 250;  // T = 1
  WaveField cur = psi;
  for (int s = 0; s < steps; ++s) cur = step_rk4(model, cur, dt);

  const double k = g.wavenumber(1);
  const Complex phase = std::exp(-kI * (k * k / 2.0) * (dt * steps));
  double err = 0.0;
  for (int j = 0; j < g.n; ++j) err = std::max(err, std::abs(cur[j] - phase * psi[j]));
  CHECK(err < 1e-8);
}

TEST_CASE("rk4 one-step error drops by about 2^5 under dt halving") {
  Grid1D g = testutil::lab_grid();
  ModelSpec model = testutil::cubic_model(1.0);
  WaveField psi = gaussian_bump(g, 0.9, 0.5 * g.length, 3.0, 1);

  auto one_step_error = [&](double dt) {
    WaveField full = step_rk4(model, psi, dt);
    WaveField half = step_rk4(model, step_rk4(model, psi, 0.5 * dt), 0.5 * dt);
    return max_abs_diff(full, half);
  };
  const double dt0 = 0.01;
  const double ratio = one_step_error(dt0) / one_step_error(0.5 * dt0);
  const double order = std::log2(ratio);
  CHECK(order > 4.5);
  CHECK(order < 5.5);
}

TEST_CASE("rk4 global order is 4") {
  Grid1D g = testutil::lab_grid();
  ModelSpec model = testutil::cubic_model(1.0);
  WaveField psi = gaussian_bump(g, 0.9, 0.5 * g.length, 3.0, 0);

  auto advance = [&](double dt, int steps) {
    WaveField cur = psi;
    for (int s = 0; s < steps; ++s) cur = step_rk4(model, cur, dt);
    return cur;
  };
  const double T = 0.12;
  WaveField reference = advance(T / 64, 64);
  const double e1 = max_abs_diff(advance(T / 8, 8), reference);
  const double e2 = max_abs_diff(advance(T / 16, 16), reference);
  const double order = std::log2(e1 / e2);
  CHECK(order > 3.7);
  CHECK(order < 4.3);
}

TEST_CASE("stability guard rejects large steps before any arithmetic") {
  Grid1D g = testutil::small_grid();
  ModelSpec model = testutil::linear_model();
  WaveField psi = plane_wave(g, 1, 1.0);
  const double limit = rk4_stability_limit(model, g);
  CHECK_THROWS_AS(step_rk4(model, psi, 1.01 * limit), StabilityError);
  EvolveConfig config;
  config.dt = 1.01 * limit;
  config.n_steps = 1;
  CHECK_THROWS_AS(evolve(model, psi, config), StabilityError);
}

TEST_CASE("unguarded rk4 on an out-of-guard step blows up and is detected") {
  Grid1D g = testutil::small_grid();
  ModelSpec model = testutil::linear_model();
  WaveField psi = random_bandlimited(g, g.n / 2 - 1, 7);
  const double dt = 1.9 * rk4_stability_limit(model, g);  // cfl ~ 0.95
  EvolveConfig config;
  config.dt = dt;
  config.n_steps = 2000;
  config.record_every = 2000;
  config.cfl = 1.0;
  CHECK_THROWS_AS(evolve(model, psi, config), BlowUpError);
}

TEST_CASE("split step is exact for the free linear equation at any dt") {
  Grid1D g = testutil::small_grid();
  ModelSpec model = testutil::linear_model();
  WaveField psi = random_bandlimited(g, 12, 11);

  const double dt = 0.37;  // far above the rk4 guard
  WaveField stepped = step_split(model, psi, dt);

  WaveField expected(g);
  const auto coeff = spectrum(psi);
  // Apply the analytic evolution factor mode by mode.
  WaveField tmp(g, std::vector<Complex>(coeff.begin(), coeff.end()));
  for (int q = 0; q < g.n; ++q) {
    const int shifted = (2 * q < g.n) ? q : q - g.n;
    const double k = g.wavenumber(shifted);
    tmp[q] *= std::exp(-kI * (k * k / 2.0) * dt);
  }
  // Inverse DFT by conjugation trick through the forward transform.
  WaveField conj_in(g);
  for (int q = 0; q < g.n; ++q) conj_in[q] = std::conj(tmp[q]);
  const auto back = spectrum(conj_in);
  for (int j = 0; j < g.n; ++j) expected[j] = std::conj(back[static_cast<size_t>(j)]) / double(g.n);

  CHECK(max_abs_diff(stepped, expected) < 1e-12);
}

TEST_CASE("split step and rk4 agree to second order on the fractal model") {
  Grid1D g = testutil::lab_grid();
  ModelSpec model = testutil::fractal_model(1.0, 0.05);
  WaveField psi = gaussian_bump(g, 1.0, 0.5 * g.length, 3.0, 0);

  auto gap = [&](double dt, int steps) {
    WaveField a = psi, b = psi;
    for (int s = 0; s < steps; ++s) {
      a = step_rk4(model, a, dt);
      b = step_split(model, b, dt);
    }
    return max_abs_diff(a, b);
  };
  const double d1 = gap(0.015, 8);
  const double d2 = gap(0.0075, 16);
  const double order = std::log2(d1 / d2);
  CHECK(order > 1.7);
  CHECK(order < 2.3);
}

TEST_CASE("split step conserves the cubic bright-pulse norm over 1000 steps") {
  Grid1D g = testutil::lab_grid();
  ModelSpec model = testutil::cubic_model(-1.0);
  WaveField psi = gaussian_bump(g, 1.0, 0.5 * g.length, 2.0, 1);
  const double n0 = norm_squared(psi);
  WaveField cur = psi;
  for (int s = 0; s < 1000; ++s) cur = step_split(model, cur, 1e-3);
  CHECK(std::abs(norm_squared(cur) - n0) / n0 < 1e-10);
}

TEST_CASE("evolve conserves the linear norm over 1e4 rk4 steps and records endpoints") {
  Grid1D g = testutil::small_grid();
  ModelSpec model = testutil::linear_model();
  WaveField psi = random_bandlimited(g, 8, 5);
  EvolveConfig config;
  // Per step rk4 damps a mode of frequency w by (w dt)^6/72; the top mode
  // here has w = 32, so dt = 1e-4 keeps 1e4 steps within 1e-10.
  config.dt = 1e-4;
  config.n_steps = 10000;
  config.record_every = 2500;
  EvolveResult result = evolve(model, psi, config);

  CHECK(result.records.front().t == 0.0);
  CHECK(result.records.back().t == doctest::Approx(config.dt * config.n_steps));
  const double n0 = result.records.front().norm2;
  for (const auto& rec : result.records) CHECK(std::abs(rec.norm2 - n0) < 1e-10);
  // Free linear evolution also conserves <psi, H psi>.
  const Complex e0 = result.records.front().energy_qm;
  for (const auto& rec : result.records) CHECK(std::abs(rec.energy_qm - e0) < 1e-9);
}

TEST_CASE("norm rate: zero for Hermitian variants, beta k^2/m * norm^2 for the fractal plane wave") {
  Grid1D g = testutil::lab_grid();
  WaveField wave = plane_wave(g, 2, 0.7);

  NormRate lin = norm_rate_check(testutil::linear_model(), wave);
  CHECK(std::abs(lin.analytic) < 1e-12);
  CHECK(lin.source_w == 0.0);

  // Direct substitution of e^{ikx} into the fractal equation gives
  // dpsi/dt = [beta k^2/(2m) - i alpha k^2/(2m)] psi, so
  // d(norm^2)/dt = (beta k^2/m) norm^2. The alpha part rotates only.
  const double beta = 0.2;
  ModelSpec model = testutil::fractal_model(1.0, beta);
  const double k = g.wavenumber(2);
  NormRate rate = norm_rate_check(model, wave);
  const double expected = beta * k * k * norm_squared(wave);
  CHECK(rate.analytic == doctest::Approx(expected).epsilon(1e-10));
  CHECK(rate.source_w == doctest::Approx(expected).epsilon(1e-10));
  CHECK(std::abs(rate.remainder) < 1e-12 * std::abs(expected) + 1e-12);
}

TEST_CASE("fractal gaussian norm rate matches the finite-difference oracle") {
  Grid1D g = testutil::lab_grid();
  ModelSpec model = testutil::fractal_model(1.0, 0.1);
  WaveField psi = gaussian_bump(g, 1.0, 0.5 * g.length, 3.0, 0);

  NormRate rate = norm_rate_check(model, psi);
  const double dt = 1e-4;
  WaveField fwd = step_rk4(model, psi, dt);
  WaveField bwd = step_rk4(model, psi, -dt);
  const double numeric = (norm_squared(fwd) - norm_squared(bwd)) / (2.0 * dt);
  CHECK(std::abs(rate.analytic - numeric) < 1e-6 * std::max(1.0, std::abs(numeric)));
}

TEST_CASE("diagnostics records keep numeric and analytic norm rates consistent") {
  Grid1D g = testutil::lab_grid();
  ModelSpec model = testutil::fractal_model(1.0, 0.1);
  WaveField psi = gaussian_bump(g, 1.0, 0.5 * g.length, 3.0, 0);
  EvolveConfig config;
  config.dt = 5e-3;
  config.n_steps = 40;
  config.record_every = 10;
  EvolveResult result = evolve(model, psi, config);
  REQUIRE(result.records.size() >= 3);
  for (size_t i = 1; i + 1 < result.records.size(); ++i) {
    const auto& rec = result.records[i];
    CHECK(std::abs(rec.norm_rate_numeric - rec.norm_rate_analytic) < 1e-5);
  }
}

TEST_CASE("record-level norm-rate consistency tightens at second order in dt") {
  Grid1D g = testutil::lab_grid();
  ModelSpec model = testutil::fractal_model(1.0, 0.1);
  WaveField psi = gaussian_bump(g, 1.0, 0.5 * g.length, 3.0, 0);

  auto interior_gap = [&](double dt) {
    EvolveConfig config;
    config.dt = dt;
    config.n_steps = 16;
    config.record_every = 4;
    EvolveResult r = evolve(model, psi, config);
    double gap = 0.0;
    for (size_t i = 1; i + 1 < r.records.size(); ++i) {
      gap = std::max(gap, std::abs(r.records[i].norm_rate_numeric -
                                   r.records[i].norm_rate_analytic));
    }
    return gap;
  };
  const double order = std::log2(interior_gap(8e-3) / interior_gap(4e-3));
  CHECK(order > 1.7);
  CHECK(order < 2.3);
}

TEST_CASE("degenerate fields propagate the log-gradient error") {
  Grid1D g = testutil::small_grid();
  WaveField zero(g);
  CHECK_THROWS_AS(time_derivative(testutil::log_model(0.1), zero),
                  DegenerateFieldError);
  CHECK_THROWS_AS(time_derivative(testutil::kinematic_model(0.5), zero),
                  DegenerateFieldError);
}

TEST_CASE("evolve config validation") {
  EvolveConfig config;
  config.dt = -1.0;
  CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
  config.dt = 0.1;
  config.n_steps = 0;
  CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
  config.n_steps = 10;
  config.record_every = 0;
  CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
}
