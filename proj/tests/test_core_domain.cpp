#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>

#include "rgn/channel_plan.hpp"
#include "rgn/constellation.hpp"
#include "rgn/units.hpp"
#include "test_helpers.hpp"

using namespace rgn;

namespace {

// independent oracle: direct moment sums over the point set
double kurtosis_oracle(const Constellation& c) {
  double m2 = 0.0, m4 = 0.0;
  for (size_t i = 0; i < c.points.size(); ++i) {
    m2 += c.probabilities[i] * std::norm(c.points[i]);
    m4 += c.probabilities[i] * std::norm(c.points[i]) * std::norm(c.points[i]);
  }
  return m4 / (m2 * m2) - 2.0;
}

// per-quadrature factorization for square QAM: E|x|^4 = EI4 + 2 EI2 EQ2 + EQ4
double kurtosis_via_quadratures(const Constellation& c) {
  double i2 = 0.0, i4 = 0.0, q2 = 0.0, q4 = 0.0;
  for (size_t i = 0; i < c.points.size(); ++i) {
    const double re = c.points[i].real(), im = c.points[i].imag();
    i2 += c.probabilities[i] * re * re;
    i4 += c.probabilities[i] * re * re * re * re;
    q2 += c.probabilities[i] * im * im;
    q4 += c.probabilities[i] * im * im * im * im;
  }
  const double m2 = i2 + q2;
  const double m4 = i4 + 2.0 * i2 * q2 + q4;
  return m4 / (m2 * m2) - 2.0;
}

}  // namespace

TEST_CASE("excess kurtosis of the built-in constellations") {
  CHECK(excess_kurtosis(make_constellation("gaussian")) == 0.0);
  CHECK(excess_kurtosis(make_constellation("qpsk")) == doctest::Approx(-1.0).epsilon(1e-14));
  // frozen from the direct moment sum over 64 equiprobable points: -13/21
  const Constellation q64 = make_constellation("64qam");
  CHECK(excess_kurtosis(q64) == doctest::Approx(-13.0 / 21.0).epsilon(1e-14));
  CHECK(excess_kurtosis(q64) == doctest::Approx(kurtosis_oracle(q64)).epsilon(1e-14));
  CHECK(excess_kurtosis(make_constellation("16qam")) ==
        doctest::Approx(-0.68).epsilon(1e-14));
  CHECK(excess_kurtosis(make_constellation("256qam")) ==
        doctest::Approx(-4369.0 / 7225.0).epsilon(1e-14));
}

TEST_CASE("kurtosis factorizes over quadratures for square QAM") {
  for (const char* tag : {"qpsk", "16qam", "64qam", "256qam"}) {
    const Constellation c = make_constellation(tag);
    CHECK(std::abs(excess_kurtosis(c) - kurtosis_via_quadratures(c)) < 1e-12);
  }
}

TEST_CASE("degenerate constellation rejected") {
  Constellation c;
  c.points = {{0.0, 0.0}, {0.0, 0.0}};
  c.probabilities = {0.5, 0.5};
  CHECK_THROWS(excess_kurtosis(c));
  Constellation empty;
  CHECK_THROWS(excess_kurtosis(empty));
}

TEST_CASE("dispersion to beta") {
  const Beta b = dispersion_to_beta(16.5, 0.0, 1550.0);
  // frozen from -D lambda^2/(2 pi c) and (lambda^2/(2 pi c))^2 (S + 2D/lambda)
  // evaluated with c = 299792458 m/s
  CHECK(b.beta2_ps2_km == doctest::Approx(-21.0449).epsilon(1e-4));
  CHECK(b.beta3_ps3_km == doctest::Approx(0.034634).epsilon(1e-4));

  const Beta z = dispersion_to_beta(0.0, 0.0, 1550.0);
  CHECK(z.beta2_ps2_km == 0.0);
  CHECK(z.beta3_ps3_km == 0.0);
}

TEST_CASE("beta3 against a finite-difference derivative of beta2(omega)") {
  const double D = 16.5, S = 0.09, lam = 1550.0;
  const Beta b = dispersion_to_beta(D, S, lam);
  // beta2 at a nearby frequency: D(lambda) = D + S (lambda - lam)
  auto beta2_at = [&](double f_thz) {
    const double l = kSpeedOfLightNmTHz / f_thz;
    const double Dl = D + S * (l - lam);
    return -Dl * l * l / (2.0 * kPi * kSpeedOfLightNmTHz);
  };
  const double f0 = thz_from_nm(lam);
  const double df = 1e-4;
  const double fd = (beta2_at(f0 + df) - beta2_at(f0 - df)) / (2.0 * df) / (2.0 * kPi);
  CHECK(rgn_test::rel_err(b.beta3_ps3_km, fd) < 1e-3);
}

TEST_CASE("beta round trip recovers D and S") {
  const Beta b = dispersion_to_beta(16.5, 0.09, 1550.0);
  double D = 0.0, S = 0.0;
  beta_to_dispersion(b, 1550.0, D, S);
  CHECK(rgn_test::rel_err(D, 16.5) < 1e-9);
  CHECK(rgn_test::rel_err(S, 0.09) < 1e-9);
}

TEST_CASE("paper-scale channel plan") {
  const std::vector<BandGap> gaps{{1522.0, 10.0}, {1567.0, 5.0}};
  const ChannelPlan plan = build_channel_plan(1530.0, 135, 140.0, 150.0, gaps, 1.0, "64qam");
  CHECK(plan.size() == 135);
  const double occupied = plan.occupied_bandwidth_thz();
  CHECK(occupied > 19.0);
  CHECK(occupied < 23.0);
  for (const auto& c : plan.channels) {
    CHECK(c.launch_power_mw == doctest::Approx(mw_from_dbm(1.0)));
    CHECK(c.excess_kurtosis == doctest::Approx(-13.0 / 21.0));
  }
  plan.validate();
}

TEST_CASE("single channel plan sits at c/lambda") {
  const ChannelPlan p = build_channel_plan(1550.0, 1, 10.0, 50.0, {}, 0.0, "gaussian");
  REQUIRE(p.size() == 1);
  CHECK(p.channels[0].center_frequency_thz ==
        doctest::Approx(kSpeedOfLightNmTHz / 1550.0).epsilon(1e-12));
  CHECK(p.channels[0].excess_kurtosis == 0.0);
}

TEST_CASE("five channel uniform grid") {
  const ChannelPlan p = build_channel_plan(1550.0, 5, 10.0, 50.0, {}, 0.0, "qpsk");
  REQUIRE(p.size() == 5);
  CHECK(p.channels[2].center_frequency_thz ==
        doctest::Approx(kSpeedOfLightNmTHz / 1550.0).epsilon(1e-12));
  for (size_t i = 1; i < 5; ++i)
    CHECK(p.channels[i].center_frequency_thz - p.channels[i - 1].center_frequency_thz ==
          doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("plan rejects overlap and negative frequencies") {
  CHECK_THROWS(build_channel_plan(1550.0, 2, 140.0, 100.0, {}, 0.0, "gaussian"));
  CHECK_THROWS(build_channel_plan(1550.0, 2, 10.0, 50.0, {{2000.0, -2.0e12}}, 0.0, "gaussian"));
}

TEST_CASE("gap application is order independent and deterministic") {
  const std::vector<BandGap> g1{{1522.0, 10.0}, {1567.0, 5.0}};
  const std::vector<BandGap> g2{{1567.0, 5.0}, {1522.0, 10.0}};
  const ChannelPlan a = build_channel_plan(1530.0, 40, 140.0, 150.0, g1, 1.0, "64qam");
  const ChannelPlan b = build_channel_plan(1530.0, 40, 140.0, 150.0, g2, 1.0, "64qam");
  const ChannelPlan c = build_channel_plan(1530.0, 40, 140.0, 150.0, g1, 1.0, "64qam");
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a.channels[i].center_frequency_thz == b.channels[i].center_frequency_thz);
    CHECK(a.channels[i].center_frequency_thz == c.channels[i].center_frequency_thz);
  }
}

TEST_CASE("unit conversions") {
  CHECK(mw_from_dbm(0.0) == doctest::Approx(1.0));
  CHECK(dbm_from_mw(100.0) == doctest::Approx(20.0));
  CHECK(per_km_from_db_per_km(0.2) == doctest::Approx(0.2 * std::log(10.0) / 10.0));
  CHECK(db_per_km_from_per_km(per_km_from_db_per_km(0.27)) == doctest::Approx(0.27));
}
