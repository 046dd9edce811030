#pragma once

#include <optional>
#include <vector>

#include "rgn/channel_plan.hpp"
#include "rgn/fiber.hpp"
#include "rgn/power_profile.hpp"
#include "rgn/pumps.hpp"

namespace rgn {

// Coupled pump/signal Raman power ODEs over one span. Backward pumps are a
// two-point BVP (injection given at z = L) solved by shooting on their z = 0
// powers with a damped Newton root-finder and a relaxation fallback.
struct RamanSolverOptions {
  int z_samples = 257;           // output grid size (>= 64 enforced by solve_profile)
  double rel_tol = 1e-8;         // integrator relative tolerance
  double abs_tol = 1e-12;        // mW
  double max_step_km = 0.0;      // 0 = tolerance-controlled only
  double bvp_tol = 1e-9;         // relative boundary residual on ln P
  int bvp_max_iterations = 60;
  bool include_signal_signal = true;   // ISRS among channels
  bool zero_raman = false;             // test hook: loss-only propagation
  double channel_bin_width_ghz = 0.0;  // 0 = no binning (one component per channel)
  std::optional<std::vector<double>> shooting_guess_mw;  // initial z=0 backward pump powers
};

PowerProfile solve_profile(const FiberSpec& fiber, const ChannelPlan& plan,
                           const PumpSet& pumps, const RamanSolverOptions& opts = {});

// Analytic undepleted on-off gain [dB]: g_R(df) * P_p * L_eff(alpha_p), with
// L_eff from the pump-wavelength power attenuation. Direction-independent.
double undepleted_onoff_gain_db(const FiberSpec& fiber, const Pump& pump,
                                double signal_frequency_thz);

}  // namespace rgn
