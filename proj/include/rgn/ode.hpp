#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

namespace rgn {

// Adaptive Dormand-Prince 5(4) integrating y' = f(z, y) through the given
// strictly increasing grid; on_grid_point is called at every grid node
// (including the first). Error control: per-component |e| <= abs_tol +
// rel_tol * |y|, PI step-size controller.
struct OdeOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double h_init = 0.0;    // 0 -> (z1 - z0) / 64
  double h_min = 1e-12;
  double h_max = 0.0;     // 0 -> unbounded
  size_t max_steps = 2'000'000;
};

using OdeRhs = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

void integrate_grid(const OdeRhs& rhs, Eigen::VectorXd& y, const std::vector<double>& grid,
                    const std::function<void(size_t, const Eigen::VectorXd&)>& on_grid_point,
                    const OdeOptions& opts = {});

}  // namespace rgn
