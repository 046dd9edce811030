#pragma once

#include <array>
#include <vector>

#include "rgn/channel_plan.hpp"
#include "rgn/fiber.hpp"
#include "rgn/profile_fit.hpp"
#include "rgn/pumps.hpp"

namespace rgn {

// One (l1, l2) index pair of the closed form, 0 <= l1 + l2 <= 1.
// Enumeration order: (0,0), (1,0), (0,1).
struct TermEntry {
  double alpha_l = 0.0;   // alpha_k + l1 alpha_f - l2 alpha_b
  double kappa_f = 1.0;   // e^(-(alpha_k + l1 alpha_f) L)
  double kappa_b = 1.0;   // e^(-l2 alpha_b L)
  double upsilon = 0.0;   // T (-T~_f/T)^l1 (T~_b/T)^l2, tilde = identity
};

struct ChannelTerms {
  double T_f = 0.0, T_b = 0.0, T = 1.0;
  std::array<TermEntry, 3> entries;
  bool division_guard_reported = false;  // alpha side zero with nonzero C
};

struct DerivedTerms {
  std::vector<ChannelTerms> per_channel;
  double span_km = 0.0;
  double f_hat_f_thz = 0.0;
  double f_hat_b_thz = 0.0;
};

// Rebuilds T_{f,k}/T_{b,k} from the exported C coefficients and the side
// aggregates, then evaluates every symbol Eq.-(2)-style formulas consume.
DerivedTerms derive_terms(const FittedCoeffs& coeffs, const PumpSet& pumps,
                          const FiberSpec& fiber, const ChannelPlan& plan);

// Model power profile as the 3-exponential sum with coefficients
// upsilon*kappa_b and rates alpha_l; equals fitted_rho of the source fit.
double terms_rho(const ChannelTerms& t, double z);

}  // namespace rgn
