#include "rgn/derived_terms.hpp"

#include <cmath>
#include <stdexcept>

namespace rgn {

DerivedTerms derive_terms(const FittedCoeffs& coeffs, const PumpSet& pumps,
                          const FiberSpec& fiber, const ChannelPlan& plan) {
  (void)pumps;  // aggregates were frozen at fit time
  if (coeffs.per_channel.size() != plan.channels.size())
    throw std::invalid_argument("derive_terms: coefficients missing for some channels");
  const double L = coeffs.span_km > 0.0 ? coeffs.span_km : fiber.span_length_km;
  const FitAggregates ag = coeffs.aggregates;

  DerivedTerms out;
  out.span_km = L;
  out.f_hat_f_thz = ag.f_hat_f_thz;
  out.f_hat_b_thz = ag.f_hat_b_thz;

  for (size_t k = 0; k < plan.channels.size(); ++k) {
    const ChannelFit& cf = coeffs.per_channel[k];
    const double fk = plan.channels[k].center_frequency_thz;
    ChannelTerms t;

    // T_{f,k} = -P_f C_{f,k}(f_k - f_hat)/alpha_f, same for the backward side.
    if (ag.P_f_mw > 0.0 && cf.C_f != 0.0) {
      if (cf.alpha_f == 0.0) {
        t.division_guard_reported = true;
      } else {
        t.T_f = -ag.P_f_mw * cf.C_f * (fk - ag.f_hat_f_thz) / cf.alpha_f;
      }
    }
    if (ag.P_b_mw > 0.0 && cf.C_b != 0.0) {
      if (cf.alpha_b == 0.0) {
        t.division_guard_reported = true;
      } else {
        t.T_b = -ag.P_b_mw * cf.C_b * (fk - ag.f_hat_b_thz) / cf.alpha_b;
      }
    }
    // Channels at the aggregate centroid have no representable C; fall back to
    // the fitted T values directly (they are the authoritative quantities).
    if (t.T_f == 0.0 && cf.T_f != 0.0 && cf.C_f == 0.0) t.T_f = cf.T_f;
    if (t.T_b == 0.0 && cf.T_b != 0.0 && cf.C_b == 0.0) t.T_b = cf.T_b;

    const double e_abL = std::exp(-cf.alpha_b * L);
    t.T = 1.0 + t.T_f - t.T_b * e_abL;

    const int l1s[3] = {0, 1, 0};
    const int l2s[3] = {0, 0, 1};
    const double ups[3] = {t.T, -t.T_f, t.T_b};
    for (int m = 0; m < 3; ++m) {
      TermEntry e;
      e.alpha_l = cf.alpha + l1s[m] * cf.alpha_f - l2s[m] * cf.alpha_b;
      e.kappa_f = std::exp(-(cf.alpha + l1s[m] * cf.alpha_f) * L);
      e.kappa_b = std::exp(-l2s[m] * cf.alpha_b * L);
      e.upsilon = ups[m];
      t.entries[static_cast<size_t>(m)] = e;
    }
    out.per_channel.push_back(t);
  }
  return out;
}

double terms_rho(const ChannelTerms& t, double z) {
  double r = 0.0;
  for (const auto& e : t.entries) r += e.upsilon * e.kappa_b * std::exp(-e.alpha_l * z);
  return r;
}

}  // namespace rgn
