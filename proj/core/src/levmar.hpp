#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace nlselab::detail {

// Damped Gauss-Newton (Levenberg-Marquardt) for small dense least-squares
// problems. Damping starts at 1e-3, x10 on a rejected step, /10 on an
// accepted one; Jacobian by forward differences with step 1e-7 * scale.
// A residual evaluation that throws during a trial step counts as a
// rejected step (the trial wandered outside the model's domain).
struct LevMarOptions {
  double initial_damping = 1e-3;
  double fd_step = 1e-7;
  double residual_tol = 1e-10;  // converged when rms residual falls below
  double step_tol = 1e-12;      // stall when the relative step falls below
  int max_iterations = 200;
  double max_damping = 1e12;
};

struct LevMarReport {
  Eigen::VectorXd x;
  double rms = 0.0;
  bool converged = false;
  int iterations = 0;
  std::string damping_history;  // '+' damping raised, '-' lowered
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Throws RankDeficiencyError (with the damping history) when the damped
// normal equations stay unsolvable at the damping ceiling.
LevMarReport levmar_minimize(const ResidualFn& residual, Eigen::VectorXd x0,
                             const LevMarOptions& options);

}  // namespace nlselab::detail
