#pragma once

#include <Eigen/Dense>
#include <functional>

namespace rgn {

// Small dense Levenberg-Marquardt with forward-difference Jacobian.
// Minimizes ||r(theta)||^2; deterministic for fixed inputs.
struct LmOptions {
  int max_iterations = 200;
  double step_tol = 1e-12;
  double grad_tol = 1e-12;
  double fd_step = 1e-7;
};

struct LmResult {
  Eigen::VectorXd theta;
  double rms = 0.0;  // sqrt(mean r^2)
  int iterations = 0;
  bool converged = false;
};

LmResult levenberg_marquardt(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residuals,
                             Eigen::VectorXd theta0, const LmOptions& opts = {});

}  // namespace rgn
