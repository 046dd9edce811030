#pragma once

#include <functional>
#include <vector>

namespace rgn {

struct QuadOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_intervals = 8192;
};

// Adaptive Gauss-Kronrod 7-15 with optional initial split points (panel
// boundaries inserted before refinement, e.g. at integrand kinks or at the
// oscillation scale of a phase factor).
double adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   const QuadOptions& opts = {}, const std::vector<double>& splits = {});

}  // namespace rgn
