#pragma once

#include "rgn/channel_plan.hpp"
#include "rgn/derived_terms.hpp"
#include "rgn/fiber.hpp"
#include "rgn/nli_common.hpp"
#include "rgn/power_profile.hpp"

namespace rgn {

// Shared evaluation context for the closed-form and integral NLI backends.
struct GnContext {
  const ChannelPlan* plan = nullptr;
  DispersionCtx disp;
  double gamma_per_mw_km = 0.0;
  double span_km = 0.0;
  const DerivedTerms* terms = nullptr;      // fitted profile model
  const PowerProfile* profile = nullptr;    // raw ODE solution
  bool use_raw_profile = false;             // integral backend: raw instead of fitted
  bool scalar_polarization = false;         // single-pol validation mode
  bool exact_fwm = false;                   // integral backend: full FWM support set
  double quad_rel_tol = 1e-7;
};

GnContext make_gn_context(const FiberSpec& fiber, const ChannelPlan& plan,
                          const DerivedTerms* terms, const PowerProfile* profile = nullptr);

// Dual-polarization Manakov prefactors, or the scalar-NLSE-consistent set
// (GN: 2 for SPM, 4 for XPM; correction: 4).
struct NliPrefactors {
  double gn_spm = 0.0;
  double gn_xpm = 0.0;
  double corr = 0.0;
};
NliPrefactors nli_prefactors(bool scalar_polarization);

}  // namespace rgn
