#include "rgn/ode.hpp"

#include <algorithm>
#include <cmath>

namespace rgn {

namespace {
// Dormand-Prince RK5(4)7M tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
}  // namespace

void integrate_grid(const OdeRhs& rhs, Eigen::VectorXd& y, const std::vector<double>& grid,
                    const std::function<void(size_t, const Eigen::VectorXd&)>& on_grid_point,
                    const OdeOptions& opts) {
  const size_t n = static_cast<size_t>(y.size());
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n), err(n);

  if (grid.size() < 2) throw std::invalid_argument("integrate_grid: need >= 2 grid points");
  if (on_grid_point) on_grid_point(0, y);

  double z = grid.front();
  double h = opts.h_init > 0.0 ? opts.h_init : (grid.back() - grid.front()) / 64.0;
  double err_prev = 1.0;
  size_t steps = 0;
  bool fresh_k1 = true;

  for (size_t gi = 1; gi < grid.size(); ++gi) {
    const double z_target = grid[gi];
    while (z < z_target - 1e-14 * (1.0 + std::abs(z_target))) {
      if (++steps > opts.max_steps) throw std::runtime_error("integrate_grid: step limit exceeded");
      if (opts.h_max > 0.0) h = std::min(h, opts.h_max);
      h = std::min(h, z_target - z);
      if (fresh_k1) rhs(z, y, k1);

      yt = y + h * (a21 * k1);
      rhs(z + c2 * h, yt, k2);
      yt = y + h * (a31 * k1 + a32 * k2);
      rhs(z + c3 * h, yt, k3);
      yt = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs(z + c4 * h, yt, k4);
      yt = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs(z + c5 * h, yt, k5);
      yt = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs(z + h, yt, k6);
      ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      rhs(z + h, ynew, k7);

      err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double norm = 0.0;
      for (size_t i = 0; i < n; ++i) {
        const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        const double q = err[i] / sc;
        norm += q * q;
      }
      norm = std::sqrt(norm / static_cast<double>(n));

      if (norm <= 1.0 || h <= opts.h_min) {
        z += h;
        y.swap(ynew);
        k1.swap(k7);  // FSAL
        fresh_k1 = false;
        const double fac = 0.9 * std::pow(std::max(norm, 1e-10), -0.7 / 5.0) *
                           std::pow(std::max(err_prev, 1e-10), 0.4 / 5.0);
        h *= std::clamp(fac, 0.2, 5.0);
        err_prev = std::max(norm, 1e-10);
      } else {
        h *= std::max(0.2, 0.9 * std::pow(norm, -1.0 / 5.0));
        if (h < opts.h_min) h = opts.h_min;
        fresh_k1 = false;  // k1 still matches (z, y)
      }
    }
    z = z_target;
    if (on_grid_point) on_grid_point(gi, y);
  }
}

}  // namespace rgn
