#include "nlselab/fractal_motion.hpp"

#include <cmath>
#include <string>

#include "nlselab/errors.hpp"

namespace nlselab {

double GaussianSampler::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // Polar Box-Muller on uniforms built from the raw 64-bit stream.
  auto uniform = [this]() {
    return (engine_() >> 11) * 0x1.0p-53;  // [0, 1) with 53 random bits
  };
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  cached_ = v * factor;
  has_cached_ = true;
  return u * factor;
}

ScalingEstimate wiener_velocity_scaling(double diffusion,
                                        std::span<const double> dt_list,
                                        long n_samples, uint64_t seed) {
  if (!(diffusion > 0.0)) {
    throw InvalidArgumentError("wiener_velocity_scaling: diffusion must be positive");
  }
  if (dt_list.size() < 2) {
    throw InvalidArgumentError("wiener_velocity_scaling: need at least two scales");
  }
  double dt_min = dt_list[0], dt_max = dt_list[0];
  for (double dt : dt_list) {
    if (!(dt > 0.0)) {
      throw InvalidArgumentError("wiener_velocity_scaling: dt must be positive");
    }
    dt_min = std::min(dt_min, dt);
    dt_max = std::max(dt_max, dt);
  }
  if (dt_max / dt_min < 100.0) {
    throw InvalidArgumentError(
        "wiener_velocity_scaling: dt_list must span at least two decades");
  }
  if (n_samples < 10000) {
    throw InvalidArgumentError("wiener_velocity_scaling: need n_samples >= 1e4");
  }

  const int n_batches = 10;
  const long batch = n_samples / n_batches;

  ScalingEstimate est;
  est.samples_per_dt = n_samples;
  std::vector<std::vector<double>> batch_means(
      dt_list.size(), std::vector<double>(static_cast<size_t>(n_batches), 0.0));

  for (size_t i = 0; i < dt_list.size(); ++i) {
    const double dt = dt_list[i];
    const double sigma = std::sqrt(2.0 * diffusion * dt);  // <dxi dxi> = 2 D dt
    // Independent sub-stream per scale: deterministic regardless of order.
    GaussianSampler rng(seed + 0x9e3779b97f4a7c15ull * (i + 1));
    double total = 0.0;
    for (int bi = 0; bi < n_batches; ++bi) {
      double acc = 0.0;
      for (long s = 0; s < batch; ++s) {
        const double dx = sigma * rng.next();
        const double v = dx / dt;
        acc += v * v;
      }
      batch_means[i][static_cast<size_t>(bi)] = acc / static_cast<double>(batch);
      total += acc;
    }
    est.mean_squared_velocity.emplace_back(
        dt, total / static_cast<double>(batch * n_batches));
  }

  // Least-squares slope of log<v^2> against log dt, overall and per batch.
  auto fit_slope = [&](const std::vector<double>& ys) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const auto n = static_cast<double>(dt_list.size());
    for (size_t i = 0; i < dt_list.size(); ++i) {
      const double lx = std::log(dt_list[i]);
      const double ly = std::log(ys[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };

  std::vector<double> overall(dt_list.size());
  for (size_t i = 0; i < dt_list.size(); ++i) overall[i] = est.mean_squared_velocity[i].second;
  est.slope = fit_slope(overall);

  double mean = 0.0, var = 0.0;
  std::vector<double> slopes(static_cast<size_t>(n_batches));
  std::vector<double> column(dt_list.size());
  for (int bi = 0; bi < n_batches; ++bi) {
    for (size_t i = 0; i < dt_list.size(); ++i) column[i] = batch_means[i][static_cast<size_t>(bi)];
    slopes[static_cast<size_t>(bi)] = fit_slope(column);
    mean += slopes[static_cast<size_t>(bi)];
  }
  mean /= n_batches;
  for (double s : slopes) var += (s - mean) * (s - mean);
  var /= (n_batches - 1);
  est.half_width = 2.0 * std::sqrt(var / n_batches);
  return est;
}

const char* regime_name(ScalingRegime r) {
  switch (r) {
    case ScalingRegime::scale_dependent: return "scale-dependent";
    case ScalingRegime::crossover: return "crossover";
    case ScalingRegime::scale_independent: return "scale-independent";
  }
  return "unknown";
}

FractalFunctionResult fractal_function_eval(std::span<const double> x_samples,
                                            double epsilon,
                                            const FractalFunctionParams& params) {
  if (!(epsilon > 0.0)) {
    throw InvalidArgumentError("fractal_function_eval: epsilon must be positive");
  }
  if (!(params.lambda > 0.0)) {
    throw InvalidArgumentError("fractal_function_eval: lambda must be positive");
  }
  if (!(params.b_rg < 0.0)) {
    throw InvalidArgumentError("fractal_function_eval: b_rg must be negative");
  }

  const double scale_term = std::pow(params.lambda / epsilon, -params.b_rg);
  FractalFunctionResult result;
  result.fluctuation_ratio = std::abs(params.zeta * scale_term);
  result.regime = result.fluctuation_ratio > 10.0 ? ScalingRegime::scale_dependent
                  : result.fluctuation_ratio < 0.1 ? ScalingRegime::scale_independent
                                                   : ScalingRegime::crossover;
  result.values.reserve(x_samples.size());
  for (size_t i = 0; i < x_samples.size(); ++i) {
    result.values.push_back(params.f0 * (1.0 + params.zeta * scale_term));
  }
  return result;
}

}  // namespace nlselab
