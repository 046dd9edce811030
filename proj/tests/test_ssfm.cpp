#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rgn/raman_solver.hpp"
#include "rgn/ssfm.hpp"
#include "rgn/units.hpp"
#include "test_helpers.hpp"

using namespace rgn;

namespace {

SsfmConfig fast_cfg(uint64_t seed = 42) {
  SsfmConfig c;
  c.symbols_per_channel = 4096;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("linear channel is exactly invertible") {
  FiberSpec f = make_flat_fiber(0.2, 80.0);
  f.gamma_per_w_km = 0.0;
  const ChannelPlan plan = rgn_test::small_plan(3, 10.0, 50.0, 0.0, "gaussian");
  const PowerProfile prof = solve_profile(f, plan, {});
  const SsfmResult r = simulate_link(fast_cfg(), f, plan, prof, 1);
  for (size_t c = 0; c < plan.size(); ++c) {
    double evm = 0.0, ref = 0.0;
    for (size_t k = 0; k < r.tx[c].size(); ++k) {
      evm += std::norm(r.rx[c][k] - r.tx[c][k]);
      ref += std::norm(r.tx[c][k]);
    }
    CHECK(std::sqrt(evm / ref) < 1e-10);
    CHECK(measure_snr_nli_db(r.tx[c], r.rx[c]) == doctest::Approx(100.0));
  }
}

TEST_CASE("zero spans is the identity") {
  FiberSpec f = make_flat_fiber(0.2, 80.0);
  const ChannelPlan plan = rgn_test::small_plan(2, 10.0, 50.0, 0.0, "qpsk");
  const PowerProfile prof = solve_profile(f, plan, {});
  const SsfmResult r = simulate_link(fast_cfg(), f, plan, prof, 0);
  for (size_t c = 0; c < plan.size(); ++c)
    for (size_t k = 0; k < r.tx[c].size(); ++k)
      CHECK(std::abs(r.rx[c][k] - r.tx[c][k]) < 1e-12);
}

TEST_CASE("energy is conserved through a lossless linear span") {
  FiberSpec f = make_flat_fiber(1e-12, 60.0);
  f.gamma_per_w_km = 0.0;
  const ChannelPlan plan = rgn_test::small_plan(3, 10.0, 50.0, 0.0, "gaussian");
  const PowerProfile prof = solve_profile(f, plan, {});
  const SsfmResult r = simulate_link(fast_cfg(), f, plan, prof, 1);
  for (size_t c = 0; c < plan.size(); ++c) {
    double in = 0.0, out = 0.0;
    for (size_t k = 0; k < r.tx[c].size(); ++k) {
      in += std::norm(r.tx[c][k]);
      out += std::norm(r.rx[c][k]);
    }
    CHECK(rgn_test::rel_err(out, in) < 1e-9);
  }
}

TEST_CASE("snr measurement definition") {
  std::mt19937_64 rng(5);
  auto uni = [&]() { return static_cast<double>(rng() >> 11) * 0x1p-53; };
  const size_t n = 20000;
  std::vector<std::complex<double>> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    const double r1 = std::sqrt(-std::log(std::max(uni(), 1e-300)));
    const double p1 = 2.0 * kPi * uni();
    x[i] = 10.0 * std::complex<double>(r1 * std::cos(p1), r1 * std::sin(p1));  // E|x|^2 = 100
    const double r2 = std::sqrt(-std::log(std::max(uni(), 1e-300)));
    const double p2 = 2.0 * kPi * uni();
    y[i] = x[i] + std::complex<double>(r2 * std::cos(p2), r2 * std::sin(p2));  // unit-variance noise
  }
  CHECK(measure_snr_nli_db(x, x) == doctest::Approx(100.0));  // ceiling guard
  CHECK(measure_snr_nli_db(x, y) == doctest::Approx(20.0).epsilon(0.005));
  std::vector<std::complex<double>> short_y(10);
  CHECK_THROWS(measure_snr_nli_db(x, short_y));
}

TEST_CASE("step halving moves the measured NLI by less than 0.05 dB") {
  FiberSpec f = make_flat_fiber(0.2, 100.0);
  const ChannelPlan plan = rgn_test::small_plan(3, 10.0, 50.0, 2.0, "gaussian");
  const PowerProfile prof = solve_profile(f, plan, {});
  SsfmConfig c1 = fast_cfg();
  SsfmConfig c2 = fast_cfg();
  c2.max_nonlinear_phase_rad = 0.5 * c1.max_nonlinear_phase_rad;
  c2.max_step_km = 0.5 * c1.max_step_km;
  const SsfmResult r1 = simulate_link(c1, f, plan, prof, 1);
  const SsfmResult r2 = simulate_link(c2, f, plan, prof, 1);
  const double s1 = measure_snr_nli_db(r1.tx[1], r1.rx[1]);
  const double s2 = measure_snr_nli_db(r2.tx[1], r2.rx[1]);
  CHECK(std::abs(s1 - s2) < 0.05);
}

TEST_CASE("NLI follows the cubic power law over a 3 dB sweep") {
  FiberSpec f = make_flat_fiber(0.2, 100.0);
  std::vector<double> powers_dbm{2.0, 3.0, 4.0, 5.0};
  std::vector<double> snr(powers_dbm.size());
  for (size_t p = 0; p < powers_dbm.size(); ++p) {
    const ChannelPlan plan = rgn_test::small_plan(3, 10.0, 50.0, powers_dbm[p], "gaussian");
    const PowerProfile prof = solve_profile(f, plan, {});
    const SsfmResult r = simulate_link(fast_cfg(), f, plan, prof, 1);
    snr[p] = measure_snr_nli_db(r.tx[1], r.rx[1]);
  }
  for (size_t p = 1; p < powers_dbm.size(); ++p) {
    const double slope = snr[p - 1] - snr[p];  // dB drop per +1 dB launch
    CHECK(slope == doctest::Approx(2.0).epsilon(0.15));
  }
}

TEST_CASE("64-QAM produces less NLI than Gaussian symbols") {
  FiberSpec f = make_flat_fiber(0.2, 100.0);
  const ChannelPlan gauss = rgn_test::small_plan(5, 10.0, 50.0, 3.0, "gaussian");
  const ChannelPlan qam = rgn_test::small_plan(5, 10.0, 50.0, 3.0, "64qam");
  const PowerProfile prof = solve_profile(f, gauss, {});
  const SsfmResult rg = simulate_link(fast_cfg(11), f, gauss, prof, 1);
  const SsfmResult rq = simulate_link(fast_cfg(11), f, qam, prof, 1);
  const double sg = measure_snr_nli_db(rg.tx[2], rg.rx[2]);
  const double sq = measure_snr_nli_db(rq.tx[2], rq.rx[2]);
  CHECK(sq > sg);
}

TEST_CASE("config validation") {
  FiberSpec f = make_flat_fiber(0.2, 100.0);
  const ChannelPlan plan = rgn_test::small_plan(2, 10.0, 50.0, 0.0, "gaussian");
  const PowerProfile prof = solve_profile(f, plan, {});
  SsfmConfig bad = fast_cfg();
  bad.symbols_per_channel = 100;  // below 2^12
  CHECK_THROWS(simulate_link(bad, f, plan, prof, 1));
  SsfmConfig alias = fast_cfg();
  alias.samples_per_symbol = 1;  // cannot hold the occupied band
  CHECK_THROWS(simulate_link(alias, f, plan, prof, 1));
}
