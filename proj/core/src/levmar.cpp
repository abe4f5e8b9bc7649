#include "levmar.hpp"

#include <cmath>

#include "nlselab/errors.hpp"

namespace nlselab::detail {

namespace {

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

LevMarReport levmar_minimize(const ResidualFn& residual, Eigen::VectorXd x0,
                             const LevMarOptions& options) {
  LevMarReport report;
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd r = residual(x);
  if (!finite(r)) {
    throw RankDeficiencyError("levmar: initial residual is not finite", "");
  }
  double cost = r.squaredNorm();
  double damping = options.initial_damping;

  const auto m = r.size();
  const auto p = x.size();

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    report.iterations = iter;
    report.rms = std::sqrt(cost / static_cast<double>(m));
    if (report.rms <= options.residual_tol) {
      report.converged = true;
      break;
    }

    // Forward-difference Jacobian.
    Eigen::MatrixXd jac(m, p);
    for (Eigen::Index c = 0; c < p; ++c) {
      const double h = options.fd_step * std::max(std::abs(x[c]), 1.0);
      Eigen::VectorXd xh = x;
      xh[c] += h;
      Eigen::VectorXd rh;
      try {
        rh = residual(xh);
      } catch (const Error&) {
        xh[c] = x[c] - h;  // probe the other side at a domain edge
        rh = residual(xh);
        jac.col(c) = (r - rh) / h;
        continue;
      }
      jac.col(c) = (rh - r) / h;
    }

    Eigen::MatrixXd hessian = jac.transpose() * jac;
    Eigen::VectorXd gradient = jac.transpose() * r;
    Eigen::VectorXd scaling = hessian.diagonal().cwiseMax(1e-30);

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd damped = hessian;
      damped.diagonal() += damping * scaling;
      Eigen::VectorXd delta = damped.ldlt().solve(-gradient);

      const bool solvable = finite(delta);
      bool ok = solvable;
      double trial_cost = 0.0;
      Eigen::VectorXd r_trial;
      if (ok) {
        try {
          r_trial = residual(x + delta);
          ok = finite(r_trial);
          if (ok) trial_cost = r_trial.squaredNorm();
        } catch (const Error&) {
          ok = false;  // trial left the model's domain; treat as a rejection
        }
      }

      if (ok && trial_cost < cost) {
        x += delta;
        r = std::move(r_trial);
        cost = trial_cost;
        damping = std::max(damping / 10.0, 1e-15);
        report.damping_history += '-';
        accepted = true;
        if (delta.norm() <= options.step_tol * (1.0 + x.norm())) {
          report.rms = std::sqrt(cost / static_cast<double>(m));
          report.x = x;
          return report;  // stalled at a (possibly nonzero) minimum
        }
      } else {
        damping *= 10.0;
        report.damping_history += '+';
        if (damping > options.max_damping) {
          if (!solvable) {
            throw RankDeficiencyError(
                "levmar: normal equations unsolvable at the damping ceiling",
                report.damping_history);
          }
          report.rms = std::sqrt(cost / static_cast<double>(m));
          report.x = x;
          return report;  // no acceptable step left; report best iterate
        }
      }
    }
  }

  report.rms = std::sqrt(cost / static_cast<double>(m));
  report.converged = report.rms <= options.residual_tol;
  report.x = x;
  return report;
}

}  // namespace nlselab::detail
