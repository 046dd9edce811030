#include "rgn/gn_context.hpp"

namespace rgn {

GnContext make_gn_context(const FiberSpec& fiber, const ChannelPlan& plan,
                          const DerivedTerms* terms, const PowerProfile* profile) {
  GnContext ctx;
  ctx.plan = &plan;
  const Beta b = fiber.beta();
  ctx.disp = DispersionCtx{b.beta2_ps2_km, b.beta3_ps3_km, fiber.reference_frequency_thz()};
  ctx.gamma_per_mw_km = fiber.gamma_per_mw_km();
  ctx.span_km = fiber.span_length_km;
  ctx.terms = terms;
  ctx.profile = profile;
  return ctx;
}

NliPrefactors nli_prefactors(bool scalar_polarization) {
  if (scalar_polarization) return {2.0, 4.0, 4.0};
  return {16.0 / 27.0, 32.0 / 27.0, 80.0 / 81.0};
}

}  // namespace rgn
