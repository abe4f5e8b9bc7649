#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace nlselab {

/// Seedable, portable Gaussian sampler: mt19937_64 (bit-exact by the
/// standard) driving a polar Box-Muller transform implemented here, so the
/// stream does not depend on the platform's distribution internals.
class GaussianSampler {
public:
  explicit GaussianSampler(uint64_t seed) : engine_(seed) {}
  double next();  // standard normal deviate

private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Velocity-scaling estimate for Wiener increments (fractal dimension 2):
/// <v^2> per time resolution dt, with the fitted log-log slope (expected -1)
/// and a batch-means confidence half-width.
struct ScalingEstimate {
  std::vector<std::pair<double, double>> mean_squared_velocity;  // (dt, <v^2>)
  double slope = 0.0;
  double half_width = 0.0;  // 2 sigma of the slope from batch means
  long samples_per_dt = 0;
};

/// Simulates increments with variance 2 * diffusion * dt at each dt,
/// estimates <(dx/dt)^2>, and fits the log-log slope. Requires dt_list
/// spanning at least two decades and n_samples >= 1e4.
ScalingEstimate wiener_velocity_scaling(double diffusion,
                                        std::span<const double> dt_list,
                                        long n_samples, uint64_t seed);

/// Two-regime fractal function f(x, eps) = f0 [1 + zeta (lambda/eps)^{-b}].
struct FractalFunctionParams {
  double f0 = 1.0;
  double zeta = 1.0;
  double lambda = 1.0;  // transition (de Broglie) scale
  double b_rg = -1.0;   // renormalization-group exponent, must be negative
};

enum class ScalingRegime { scale_dependent, crossover, scale_independent };
const char* regime_name(ScalingRegime r);

struct FractalFunctionResult {
  std::vector<double> values;
  ScalingRegime regime = ScalingRegime::crossover;
  double fluctuation_ratio = 0.0;  // |zeta (lambda/eps)^{-b}|
};

FractalFunctionResult fractal_function_eval(std::span<const double> x_samples,
                                            double epsilon,
                                            const FractalFunctionParams& params);

}  // namespace nlselab
