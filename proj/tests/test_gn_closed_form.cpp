#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rgn/derived_terms.hpp"
#include "rgn/gn_closed_form.hpp"
#include "rgn/gn_integral.hpp"
#include "rgn/profile_fit.hpp"
#include "rgn/raman_solver.hpp"
#include "test_helpers.hpp"

using namespace rgn;
using rgn_test::db_ratio;
using rgn_test::rel_err;

namespace {

ChannelTerms make_terms(double alpha, double T_f, double alpha_f, double T_b, double alpha_b,
                        double L) {
  ChannelTerms t;
  t.T_f = T_f;
  t.T_b = T_b;
  t.T = 1.0 + T_f - T_b * std::exp(-alpha_b * L);
  const int l1s[3] = {0, 1, 0};
  const int l2s[3] = {0, 0, 1};
  const double ups[3] = {t.T, -T_f, T_b};
  for (int m = 0; m < 3; ++m) {
    TermEntry e;
    e.alpha_l = alpha + l1s[m] * alpha_f - l2s[m] * alpha_b;
    e.kappa_f = std::exp(-(alpha + l1s[m] * alpha_f) * L);
    e.kappa_b = std::exp(-l2s[m] * alpha_b * L);
    e.upsilon = ups[m];
    t.entries[static_cast<size_t>(m)] = e;
  }
  return t;
}

DerivedTerms uniform_terms(const ChannelPlan& plan, double alpha, double L) {
  DerivedTerms dt;
  dt.span_km = L;
  for (size_t i = 0; i < plan.size(); ++i)
    dt.per_channel.push_back(make_terms(alpha, 0.0, 1.0, 0.0, 1.0, L));
  return dt;
}

struct Solved {
  PowerProfile prof;
  FittedCoeffs fc;
  DerivedTerms dt;
};

Solved solve_and_fit(const FiberSpec& f, const ChannelPlan& plan, const PumpSet& pumps) {
  Solved s;
  s.prof = solve_profile(f, plan, pumps);
  s.fc = fit_profile(s.prof, plan, pumps);
  s.dt = derive_terms(s.fc, pumps, f, plan);
  return s;
}

}  // namespace

TEST_CASE("Gaussian collapse: correction is exactly zero") {
  const FiberSpec f = make_flat_fiber(0.2, 100.0);
  const ChannelPlan plan = rgn_test::small_plan(5, 10.0, 50.0, 0.0, "gaussian");
  const DerivedTerms dt = uniform_terms(plan, per_km_from_db_per_km(0.2), 100.0);
  GnContext ctx = make_gn_context(f, plan, &dt, nullptr);
  for (size_t i = 0; i < plan.size(); ++i) {
    CHECK(eta_corr_closed(ctx, i, 1) == 0.0);
    CHECK(eta_corr_closed(ctx, i, 10) == 0.0);
  }
}

TEST_CASE("loss-only 64-QAM: closed form vs quadrature oracle") {
  const FiberSpec f = make_flat_fiber(0.2, 100.0);
  const ChannelPlan plan = rgn_test::small_plan(5, 10.0, 50.0, 0.0, "64qam");
  const DerivedTerms dt = uniform_terms(plan, per_km_from_db_per_km(0.2), 100.0);
  GnContext ctx = make_gn_context(f, plan, &dt, nullptr);
  for (size_t i = 0; i < plan.size(); ++i) {
    const double cc = eta_corr_closed(ctx, i, 1);
    const double cq = eta_corr_integral(ctx, i, 1);
    CHECK(std::abs(db_ratio(cc, cq)) < 0.2);
    const double gc = eta_gn_closed(ctx, i, 1);
    const double gq = eta_gn_integral(ctx, i, 1);
    CHECK(std::abs(db_ratio(gc, gq)) < 0.3);
  }
}

TEST_CASE("backward-pumped 64-QAM, ten spans: closed form vs quadrature oracle") {
  FiberSpec f = make_flat_fiber(0.21, 100.0, 0.42, 13.0);
  const ChannelPlan plan = rgn_test::small_plan(3, 40.0, 100.0, 2.0, "64qam", 1490.0);
  PumpSet pumps;
  pumps.pumps.push_back({1398.0, 160.0, PumpDirection::Backward});
  pumps.pumps.push_back({1410.0, 140.0, PumpDirection::Backward});
  const Solved s = solve_and_fit(f, plan, pumps);
  GnContext ctx = make_gn_context(f, plan, &s.dt, &s.prof);
  for (size_t i = 0; i < plan.size(); ++i) {
    for (int n : {1, 10}) {
      const double cc = eta_corr_closed(ctx, i, n);
      const double cq = eta_corr_integral(ctx, i, n);
      CHECK(std::abs(db_ratio(cc, cq)) < 0.3);
      const double gc = eta_gn_closed(ctx, i, n);
      const double gq = eta_gn_integral(ctx, i, n);
      CHECK(std::abs(db_ratio(gc, gq)) < 0.3);
    }
  }
}

TEST_CASE("single-channel SPM: closed vs integral and span growth") {
  const FiberSpec f = make_flat_fiber(0.2, 100.0);
  const ChannelPlan plan = rgn_test::small_plan(1, 10.0, 50.0, 0.0, "gaussian");
  const DerivedTerms dt = uniform_terms(plan, per_km_from_db_per_km(0.2), 100.0);
  GnContext ctx = make_gn_context(f, plan, &dt, nullptr);
  const double g1c = eta_gn_closed(ctx, 0, 1);
  const double g1q = eta_gn_integral(ctx, 0, 1);
  CHECK(std::abs(db_ratio(g1c, g1q)) < 0.3);
  const double g10c = eta_gn_closed(ctx, 0, 10);
  const double g10q = eta_gn_integral(ctx, 0, 10);
  CHECK(std::abs(db_ratio(g10c, g10q)) < 0.3);
  // coherent accumulation: growth between n and n^2 (epsilon < 1)
  CHECK(g10c > 10.0 * g1c);
  CHECK(g10c < 100.0 * g1c);
}

TEST_CASE("no-pump collapse reproduces the hand-evaluated single-term formula") {
  const FiberSpec f = make_flat_fiber(0.2, 100.0);
  const ChannelPlan plan = rgn_test::small_plan(2, 10.0, 50.0, 0.0, "64qam");
  const double alpha = per_km_from_db_per_km(0.2);
  const double L = 100.0;
  const DerivedTerms dt = uniform_terms(plan, alpha, L);
  GnContext ctx = make_gn_context(f, plan, &dt, nullptr);
  const double closed = eta_corr_closed(ctx, 0, 1);

  // test-side oracle: only the (0,0)x(0,0) term survives, with kappa_b = 1
  const Channel& ci = plan.channels[0];
  const Channel& ck = plan.channels[1];
  const double phi = phi_ik(ctx.disp, ci.center_frequency_thz, ck.center_frequency_thz);
  const double E = std::exp(-alpha * L);
  const double brace =
      2.0 * (E * E + 1.0) / (phi * 2.0 * alpha) * 2.0 *
          std::atan(phi * ci.bandwidth_thz / (2.0 * alpha)) +
      kPi * (-(E + E) / (phi * 2.0 * alpha)) * (2.0 * (phi > 0 ? 1.0 : -1.0) * E);
  const double g2 = ctx.gamma_per_mw_km * ctx.gamma_per_mw_km;
  const double expect = (80.0 / 81.0) * ck.excess_kurtosis * (g2 / ck.bandwidth_thz) * brace;
  CHECK(rel_err(closed, expect) < 1e-6);
}

TEST_CASE("double-sum parity: swapping the index pairs changes nothing") {
  const FiberSpec f = make_flat_fiber(0.2, 100.0);
  const ChannelPlan plan = rgn_test::small_plan(3, 40.0, 100.0, 2.0, "64qam", 1490.0);
  DerivedTerms dt;
  dt.span_km = 100.0;
  for (size_t i = 0; i < plan.size(); ++i)
    dt.per_channel.push_back(make_terms(0.046, -0.08, 0.09, 0.15, 0.055, 100.0));
  DerivedTerms swapped = dt;
  for (auto& t : swapped.per_channel) std::swap(t.entries[1], t.entries[2]);
  GnContext a = make_gn_context(f, plan, &dt, nullptr);
  GnContext b = make_gn_context(f, plan, &swapped, nullptr);
  CHECK(eta_corr_closed(a, 1, 1) == doctest::Approx(eta_corr_closed(b, 1, 1)).epsilon(1e-12));
  CHECK(eta_corr_closed(a, 1, 7) == doctest::Approx(eta_corr_closed(b, 1, 7)).epsilon(1e-12));
}

TEST_CASE("correction scales linearly in the excess kurtosis") {
  const FiberSpec f = make_flat_fiber(0.2, 100.0);
  ChannelPlan plan = rgn_test::small_plan(4, 10.0, 50.0, 0.0, "64qam");
  const DerivedTerms dt = uniform_terms(plan, per_km_from_db_per_km(0.2), 100.0);
  const double e1 = eta_corr_closed(make_gn_context(f, plan, &dt, nullptr), 1, 1);
  for (auto& c : plan.channels) c.excess_kurtosis *= 0.5;
  const double e2 = eta_corr_closed(make_gn_context(f, plan, &dt, nullptr), 1, 1);
  CHECK(rel_err(e2, 0.5 * e1) < 1e-12);
}

TEST_CASE("correction is invariant under uniform power scaling") {
  const FiberSpec f = make_flat_fiber(0.2, 100.0);
  ChannelPlan plan = rgn_test::small_plan(4, 10.0, 50.0, 0.0, "16qam");
  const DerivedTerms dt = uniform_terms(plan, per_km_from_db_per_km(0.2), 100.0);
  const double e1 = eta_corr_closed(make_gn_context(f, plan, &dt, nullptr), 2, 1);
  for (auto& c : plan.channels) c.launch_power_mw *= 0.2;
  const double e2 = eta_corr_closed(make_gn_context(f, plan, &dt, nullptr), 2, 1);
  CHECK(rel_err(e1, e2) < 1e-12);
}

TEST_CASE("no-pump coherence factor equals e^(-alpha L) - 1") {
  // the (0,0) entry of a loss-only channel
  const ChannelTerms t = make_terms(0.046, 0.0, 1.0, 0.0, 1.0, 100.0);
  CHECK(t.entries[0].kappa_f - t.entries[0].kappa_b ==
        doctest::Approx(std::exp(-0.046 * 100.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("zero net dispersion pair: guarded evaluation still matches the oracle") {
  // beta2 > 0 with beta3 > 0 puts the phase zero inside the band
  FiberSpec f = make_flat_fiber(0.2, 80.0);
  double D, S;
  beta_to_dispersion(Beta{-0.10, 0.10}, 1550.0, D, S);
  f.dispersion_D = D;
  f.dispersion_slope_S = S;
  const ChannelPlan plan = rgn_test::small_plan(5, 10.0, 40.0, 0.0, "64qam", 1550.0);
  // place the reference so that beta2 + pi beta3 (fi~ + fk~) crosses zero
  const DerivedTerms dt = uniform_terms(plan, per_km_from_db_per_km(0.2), 80.0);
  GnContext ctx = make_gn_context(f, plan, &dt, nullptr);
  ctx.disp.f_ref_thz = plan.channels[2].center_frequency_thz - 0.159;  // fi~+fk~ ~ 0.318
  for (size_t i = 0; i < plan.size(); ++i) {
    ClosedFormDiag diag;
    const double cc = eta_corr_closed(ctx, i, 1, &diag);
    const double cq = eta_corr_integral(ctx, i, 1);
    if (cc != 0.0 && cq != 0.0) CHECK(std::abs(db_ratio(cc, cq)) < 0.3);
  }
}

TEST_CASE("snr assembly") {
  // eta = 1e-4 1/mW^2 at 1 mW -> 40 dB
  CHECK(snr_assemble(1e-4, 1.0).snr_nli_db == doctest::Approx(40.0).epsilon(1e-12));
  // absent ASE/TRX terms: total equals the NLI-only SNR
  const SnrResult only = snr_assemble(1e-3, 2.0);
  CHECK(only.snr_total_db == doctest::Approx(only.snr_nli_db));
  // 30 dB + 30 dB -> 26.99 dB
  const SnrResult two = snr_assemble(1e-3, 1.0, 30.0);
  CHECK(two.snr_nli_db == doctest::Approx(30.0));
  CHECK(two.snr_total_db == doctest::Approx(26.9897).epsilon(1e-4));
  // non-positive eta surfaced, not masked
  CHECK(snr_assemble(-1e-5, 1.0).eta_nonpositive);
  CHECK_THROWS(snr_assemble(1e-4, 0.0));
}

TEST_CASE("evaluate_nli populates both backends consistently") {
  const FiberSpec f = make_flat_fiber(0.2, 100.0);
  const ChannelPlan plan = rgn_test::small_plan(3, 10.0, 50.0, 0.0, "64qam");
  const DerivedTerms dt = uniform_terms(plan, per_km_from_db_per_km(0.2), 100.0);
  GnContext ctx = make_gn_context(f, plan, &dt, nullptr);
  const NliResult rc = evaluate_nli(ctx, NliBackend::Closed, 1);
  const NliResult ri = evaluate_nli(ctx, NliBackend::Integral, 1);
  REQUIRE(rc.per_channel.size() == 3);
  CHECK(rc.backend == "closed");
  CHECK(ri.backend == "integral");
  for (size_t i = 0; i < 3; ++i) {
    CHECK(rc.per_channel[i].eta_total ==
          doctest::Approx(rc.per_channel[i].eta_gn + rc.per_channel[i].eta_corr));
    CHECK(std::abs(db_ratio(rc.per_channel[i].eta_total, ri.per_channel[i].eta_total)) < 0.3);
  }
}
