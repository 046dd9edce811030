#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rgn/derived_terms.hpp"
#include "rgn/profile_fit.hpp"
#include "rgn/raman_solver.hpp"
#include "rgn/units.hpp"
#include "test_helpers.hpp"

using namespace rgn;
using rgn_test::rel_err;

namespace {

FiberSpec raman_fiber(double att = 0.2, double span = 100.0) {
  return make_flat_fiber(att, span, 0.42, 13.0);
}

PumpSet backward_pumps() {
  PumpSet p;
  p.pumps.push_back({1398.0, 150.0, PumpDirection::Backward});
  p.pumps.push_back({1408.0, 180.0, PumpDirection::Backward});
  return p;
}

}  // namespace

TEST_CASE("loss-only fit recovers the attenuation with zero gain terms") {
  const FiberSpec f = make_flat_fiber(0.2, 100.0);
  const ChannelPlan plan = rgn_test::small_plan(1);
  const PowerProfile prof = solve_profile(f, plan, {});
  const FittedCoeffs fc = fit_profile(prof, plan, {});
  REQUIRE(fc.per_channel.size() == 1);
  const ChannelFit& cf = fc.per_channel[0];
  CHECK(std::abs(cf.C_f) < 1e-6);
  CHECK(std::abs(cf.C_b) < 1e-6);
  // alpha is the local power attenuation rate
  CHECK(rel_err(cf.alpha, per_km_from_db_per_km(0.2)) < 1e-3);
  CHECK(cf.rms_db < 1e-4);
  CHECK(cf.converged);
}

TEST_CASE("fit is deterministic") {
  const FiberSpec f = raman_fiber();
  const ChannelPlan plan = rgn_test::small_plan(5, 40.0, 100.0, 3.0, "gaussian", 1490.0);
  const PumpSet pumps = backward_pumps();
  const PowerProfile prof = solve_profile(f, plan, pumps);
  const FittedCoeffs a = fit_profile(prof, plan, pumps);
  const FittedCoeffs b = fit_profile(prof, plan, pumps);
  for (size_t k = 0; k < a.per_channel.size(); ++k) {
    CHECK(a.per_channel[k].alpha == b.per_channel[k].alpha);
    CHECK(a.per_channel[k].T_f == b.per_channel[k].T_f);
    CHECK(a.per_channel[k].T_b == b.per_channel[k].T_b);
    CHECK(a.per_channel[k].rms_db == b.per_channel[k].rms_db);
  }
}

TEST_CASE("pumped fit reproduces the solved profile within its residual") {
  const FiberSpec f = raman_fiber();
  const ChannelPlan plan = rgn_test::small_plan(6, 40.0, 150.0, 2.0, "gaussian", 1490.0);
  const PumpSet pumps = backward_pumps();
  const PowerProfile prof = solve_profile(f, plan, pumps);
  const FittedCoeffs fc = fit_profile(prof, plan, pumps);
  for (size_t k = 0; k < plan.size(); ++k) {
    const ChannelFit& cf = fc.per_channel[k];
    CHECK(cf.rms_db <= 0.1);
    // reconstruction, independent of the fitter internals
    double sq = 0.0;
    for (size_t g = 0; g < prof.z_km.size(); ++g) {
      const double model_db = db_from_linear(fitted_rho(cf, fc.span_km, prof.z_km[g]));
      const double data_db = db_from_linear(prof.normalized[k][g]);
      sq += (model_db - data_db) * (model_db - data_db);
    }
    const double rms = std::sqrt(sq / static_cast<double>(prof.z_km.size()));
    CHECK(rms <= cf.rms_db * 1.0001 + 1e-12);
  }
}

TEST_CASE("signal-ISRS tilt is captured by the forward-like term") {
  const FiberSpec f = raman_fiber();
  // wide unpumped grid with strong total power: edge channels tilt
  const ChannelPlan plan = rgn_test::small_plan(9, 40.0, 500.0, 9.0, "gaussian", 1530.0);
  const PowerProfile prof = solve_profile(f, plan, {});
  const FittedCoeffs fc = fit_profile(prof, plan, {});
  for (size_t k = 0; k < plan.size(); ++k) CHECK(fc.per_channel[k].rms_db <= 0.1);
  // highest-frequency channel is a donor: its forward amplitude term must be
  // active on a grid this wide
  CHECK(std::abs(fc.per_channel.back().T_f) > 1e-4);
}

TEST_CASE("fit responds continuously to a uniform profile offset") {
  const FiberSpec f = raman_fiber();
  const ChannelPlan plan = rgn_test::small_plan(3, 40.0, 150.0, 2.0, "gaussian", 1490.0);
  const PumpSet pumps = backward_pumps();
  PowerProfile prof = solve_profile(f, plan, pumps);
  const FittedCoeffs base = fit_profile(prof, plan, pumps);
  const double scale = linear_from_db(0.01);
  for (size_t c = 0; c < plan.size(); ++c)
    for (auto& v : prof.normalized[c]) v *= scale;
  const FittedCoeffs shifted = fit_profile(prof, plan, pumps);
  for (size_t k = 0; k < plan.size(); ++k)
    CHECK(rel_err(shifted.per_channel[k].alpha, base.per_channel[k].alpha) < 1e-3);
}

TEST_CASE("derived terms: definitions and trivial collapses") {
  const FiberSpec f = raman_fiber();
  const ChannelPlan plan = rgn_test::small_plan(1, 10.0, 50.0, 0.0, "gaussian", 1550.0);
  const PowerProfile prof = solve_profile(f, plan, {});
  const FittedCoeffs fc = fit_profile(prof, plan, {});
  const DerivedTerms dt = derive_terms(fc, {}, f, plan);
  REQUIRE(dt.per_channel.size() == 1);
  const ChannelTerms& t = dt.per_channel[0];
  // no pumps: T collapses to 1, only the (0,0) term survives
  CHECK(t.T_f == 0.0);
  CHECK(t.T_b == 0.0);
  CHECK(t.T == doctest::Approx(1.0));
  CHECK(t.entries[0].upsilon == doctest::Approx(1.0));
  CHECK(t.entries[1].upsilon == 0.0);
  CHECK(t.entries[2].upsilon == 0.0);
  // (0,0): kappa_b = 1, kappa_f = e^(-alpha L), alpha_l = alpha
  CHECK(t.entries[0].kappa_b == 1.0);
  CHECK(t.entries[0].kappa_f ==
        doctest::Approx(std::exp(-fc.per_channel[0].alpha * fc.span_km)).epsilon(1e-12));
  CHECK(t.entries[0].alpha_l == fc.per_channel[0].alpha);
}

TEST_CASE("derived terms under backward pumping") {
  const FiberSpec f = raman_fiber();
  const ChannelPlan plan = rgn_test::small_plan(4, 40.0, 150.0, 2.0, "gaussian", 1490.0);
  const PumpSet pumps = backward_pumps();
  const PowerProfile prof = solve_profile(f, plan, pumps);
  const FittedCoeffs fc = fit_profile(prof, plan, pumps);
  const DerivedTerms dt = derive_terms(fc, pumps, f, plan);
  const double L = dt.span_km;
  for (size_t k = 0; k < plan.size(); ++k) {
    const ChannelTerms& t = dt.per_channel[k];
    const ChannelFit& cf = fc.per_channel[k];
    // T = 1 + T_f - T_b e^(-alpha_b L); sum rule over the three upsilons
    CHECK(t.T == doctest::Approx(1.0 + t.T_f - t.T_b * std::exp(-cf.alpha_b * L)).epsilon(1e-12));
    const double ups_sum = t.entries[0].upsilon + t.entries[1].upsilon + t.entries[2].upsilon;
    CHECK(ups_sum == doctest::Approx(t.T - t.T_f + t.T_b).epsilon(1e-12));
    // model profile equals 1 at z = 0 and matches fitted_rho everywhere
    CHECK(terms_rho(t, 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    for (double z = 0.0; z <= L; z += L / 7.0)
      CHECK(rel_err(terms_rho(t, z), fitted_rho(cf, L, z)) < 1e-9);
    // alpha_l exact relations
    CHECK(t.entries[1].alpha_l == doctest::Approx(cf.alpha + cf.alpha_f));
    CHECK(t.entries[2].alpha_l == doctest::Approx(cf.alpha - cf.alpha_b));
    CHECK(t.entries[2].kappa_b == doctest::Approx(std::exp(-cf.alpha_b * L)));
  }
}

TEST_CASE("identical profiles give identical coefficients") {
  const FiberSpec f = raman_fiber();
  const ChannelPlan plan = rgn_test::small_plan(2, 40.0, 150.0, 2.0, "gaussian", 1490.0);
  const PumpSet pumps = backward_pumps();
  const PowerProfile prof = solve_profile(f, plan, pumps);
  PowerProfile copy = prof;
  const FittedCoeffs a = fit_profile(prof, plan, pumps);
  const FittedCoeffs b = fit_profile(copy, plan, pumps);
  for (size_t k = 0; k < plan.size(); ++k)
    CHECK(a.per_channel[k].alpha == b.per_channel[k].alpha);
}
