#pragma once

#include <vector>

#include "rgn/channel_plan.hpp"
#include "rgn/power_profile.hpp"
#include "rgn/pumps.hpp"

namespace rgn {

// Per-channel coefficients of the semi-analytic profile family
//   rho_hat(z) = T e^(-alpha z) - T_f e^(-(alpha+alpha_f) z)
//              + T_b e^(-alpha_b L) e^(-(alpha-alpha_b) z),
//   T = 1 + T_f - T_b e^(-alpha_b L),
// fitted in dB against the solved rho(z, f_k). alpha is the full power
// attenuation rate [1/km]; T_f/T_b are the dimensionless gain amplitudes the
// closed form consumes, reported also as the gain-slope coefficients
// C = -T alpha_side / (P_side (f_k - f_hat_side)).
struct ChannelFit {
  double alpha = 0.0;      // 1/km
  double alpha_f = 0.0;    // 1/km (0 when the forward term is inactive)
  double alpha_b = 0.0;    // 1/km
  double C_f = 0.0;        // 1/(mW km THz)
  double C_b = 0.0;
  double T_f = 0.0;
  double T_b = 0.0;
  double rms_db = 0.0;
  bool converged = true;   // false when rms exceeds the configured ceiling
  bool forward_active = false;
  bool backward_active = false;
};

// Side-wise aggregates parameterizing the C coefficients. The forward side
// folds the launched signals in with any forward pumps (co-propagating Raman
// donors/acceptors); the backward side is the backward pumps alone.
struct FitAggregates {
  double P_f_mw = 0.0;
  double P_b_mw = 0.0;
  double f_hat_f_thz = 0.0;  // power-weighted mean frequency of the side
  double f_hat_b_thz = 0.0;
};

struct FittedCoeffs {
  std::vector<ChannelFit> per_channel;
  FitAggregates aggregates;
  double span_km = 0.0;
};

struct FitOptions {
  double residual_ceiling_db = 0.5;
  int max_iterations = 300;
};

FitAggregates fit_aggregates(const ChannelPlan& plan, const PumpSet& pumps);

FittedCoeffs fit_profile(const PowerProfile& profile, const ChannelPlan& plan,
                         const PumpSet& pumps, const FitOptions& opts = {});

// Model power profile rebuilt from one channel's coefficients.
double fitted_rho(const ChannelFit& f, double span_km, double z);

}  // namespace rgn
