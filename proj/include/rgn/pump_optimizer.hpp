#pragma once

#include <cstdint>
#include <vector>

#include "rgn/channel_plan.hpp"
#include "rgn/fiber.hpp"
#include "rgn/pumps.hpp"
#include "rgn/raman_solver.hpp"

namespace rgn {

// Minimal-total-power backward pump allocation recovering a band at span end.
struct PumpProblem {
  std::vector<double> candidate_wavelengths_nm;
  std::vector<double> power_cap_mw;        // per pump, same length
  double band_lo_thz = 0.0;                // target band (inclusive)
  double band_hi_thz = 0.0;
  double recovery_tolerance_db = 0.1;      // per-channel |10 log10 rho(L)| bound
  bool band_average = false;               // constrain the band mean instead
  uint64_t seed = 1;
  int population = 16;
  int generations = 40;
  int descent_steps = 60;
  int threads = 0;                         // 0 = hardware concurrency
};

struct OptimizerTracePoint {
  int iteration = 0;
  double cost_mw = 0.0;
  double max_violation_db = 0.0;
  bool feasible = false;
};

struct PumpOptimizationReport {
  PumpSet pumps;
  bool feasible = false;
  double cost_mw = 0.0;
  std::vector<double> per_channel_error_db;  // target-band channels, low to high f
  std::vector<OptimizerTracePoint> trace;    // accepted incumbents, cost non-increasing
  int evaluations = 0;
};

PumpOptimizationReport optimize_pumps(const PumpProblem& problem, const FiberSpec& fiber,
                                      const ChannelPlan& plan,
                                      const RamanSolverOptions& solver_opts = {});

// 10 log10 rho(L, f) per target-band channel (0 dB = perfect recovery).
std::vector<double> evaluate_recovery(const PumpSet& pumps, const FiberSpec& fiber,
                                      const ChannelPlan& plan, double band_lo_thz,
                                      double band_hi_thz,
                                      const RamanSolverOptions& solver_opts = {});

}  // namespace rgn
