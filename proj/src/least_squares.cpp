#include "rgn/least_squares.hpp"

#include <cmath>

namespace rgn {

LmResult levenberg_marquardt(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& residuals,
                             Eigen::VectorXd theta0, const LmOptions& opts) {
  const long p = theta0.size();
  Eigen::VectorXd theta = std::move(theta0);
  Eigen::VectorXd r = residuals(theta);
  const long n = r.size();
  double cost = r.squaredNorm();
  double lambda = 1e-3;

  Eigen::MatrixXd J(n, p);
  LmResult out;
  int it = 0;
  bool jacobian_fresh = false;
  for (; it < opts.max_iterations; ++it) {
    if (!jacobian_fresh) {
      for (long j = 0; j < p; ++j) {
        Eigen::VectorXd tj = theta;
        const double h = opts.fd_step * std::max(1.0, std::abs(theta[j]));
        tj[j] += h;
        J.col(j) = (residuals(tj) - r) / h;
      }
      jacobian_fresh = true;
    }
    Eigen::MatrixXd A = J.transpose() * J;
    Eigen::VectorXd g = J.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() < opts.grad_tol) break;

    Eigen::MatrixXd Ad = A;
    for (long j = 0; j < p; ++j) Ad(j, j) += lambda * std::max(A(j, j), 1e-12);
    Eigen::VectorXd step = Ad.ldlt().solve(-g);
    if (!step.allFinite()) {
      lambda *= 10.0;
      continue;
    }
    Eigen::VectorXd tn = theta + step;
    Eigen::VectorXd rn = residuals(tn);
    const double cn = rn.squaredNorm();
    if (cn < cost) {
      const double rel = std::abs(cost - cn) / std::max(cost, 1e-300);
      theta = tn;
      r = rn;
      cost = cn;
      lambda = std::max(lambda * 0.3, 1e-12);
      jacobian_fresh = false;
      if (step.lpNorm<Eigen::Infinity>() < opts.step_tol || rel < 1e-14) break;
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }
  out.theta = theta;
  out.rms = std::sqrt(cost / static_cast<double>(n));
  out.iterations = it;
  out.converged = it < opts.max_iterations;
  return out;
}

}  // namespace rgn
