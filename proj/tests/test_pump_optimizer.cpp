#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rgn/pump_optimizer.hpp"
#include "rgn/units.hpp"
#include "test_helpers.hpp"

using namespace rgn;

namespace {

FiberSpec raman_fiber() { return make_flat_fiber(0.22, 80.0, 0.42, 13.0); }

ChannelPlan band_plan() { return rgn_test::small_plan(6, 40.0, 100.0, 0.0, "gaussian", 1480.0); }

PumpProblem small_problem(const ChannelPlan& plan) {
  PumpProblem pb;
  pb.candidate_wavelengths_nm = {1382.0, 1392.0};
  pb.power_cap_mw = {400.0, 400.0};
  pb.band_lo_thz = plan.channels.front().center_frequency_thz - 0.01;
  pb.band_hi_thz = plan.channels.back().center_frequency_thz + 0.01;
  pb.recovery_tolerance_db = 0.1;
  pb.seed = 7;
  pb.population = 10;
  pb.generations = 14;
  pb.descent_steps = 20;
  return pb;
}

RamanSolverOptions fast_solver() {
  RamanSolverOptions o;
  o.z_samples = 65;
  o.rel_tol = 1e-7;
  return o;
}

}  // namespace

TEST_CASE("empty target band costs nothing") {
  const FiberSpec f = raman_fiber();
  const ChannelPlan plan = band_plan();
  PumpProblem pb = small_problem(plan);
  pb.band_lo_thz = 500.0;  // outside the plan
  pb.band_hi_thz = 501.0;
  const auto rep = optimize_pumps(pb, f, plan, fast_solver());
  CHECK(rep.feasible);
  CHECK(rep.cost_mw == 0.0);
  for (const auto& p : rep.pumps.pumps) CHECK(p.injection_power_mw == 0.0);
}

TEST_CASE("zero pumps leave the span at its loss floor") {
  const FiberSpec f = raman_fiber();
  const ChannelPlan plan = band_plan();
  const auto err = evaluate_recovery({}, f, plan,
                                     plan.channels.front().center_frequency_thz - 0.01,
                                     plan.channels.back().center_frequency_thz + 0.01,
                                     fast_solver());
  REQUIRE(err.size() == plan.size());
  // flat 0.22 dB/km over 80 km, ISRS among six 1 mW channels is negligible
  for (double e : err) CHECK(e == doctest::Approx(-17.6).epsilon(2e-3));
}

TEST_CASE("recovered feasible allocation with caps, monotone trace, reproducibility") {
  const FiberSpec f = raman_fiber();
  const ChannelPlan plan = band_plan();
  const PumpProblem pb = small_problem(plan);
  const auto rep = optimize_pumps(pb, f, plan, fast_solver());
  REQUIRE(rep.feasible);
  for (size_t i = 0; i < rep.pumps.pumps.size(); ++i) {
    CHECK(rep.pumps.pumps[i].injection_power_mw <= pb.power_cap_mw[i] + 1e-9);
    CHECK(rep.pumps.pumps[i].injection_power_mw >= -1e-9);
  }
  for (double e : rep.per_channel_error_db) CHECK(std::abs(e) <= pb.recovery_tolerance_db + 1e-9);
  // accepted-cost trace is non-increasing
  for (size_t i = 1; i < rep.trace.size(); ++i)
    CHECK(rep.trace[i].cost_mw <= rep.trace[i - 1].cost_mw + 1e-12);

  // bit-for-bit reproducible with the same seed
  const auto rep2 = optimize_pumps(pb, f, plan, fast_solver());
  REQUIRE(rep2.pumps.pumps.size() == rep.pumps.pumps.size());
  for (size_t i = 0; i < rep.pumps.pumps.size(); ++i)
    CHECK(rep2.pumps.pumps[i].injection_power_mw == rep.pumps.pumps[i].injection_power_mw);
  CHECK(rep2.cost_mw == rep.cost_mw);
}

TEST_CASE("loosening the tolerance can only lower the cost") {
  const FiberSpec f = raman_fiber();
  const ChannelPlan plan = band_plan();
  PumpProblem tight = small_problem(plan);
  PumpProblem loose = small_problem(plan);
  loose.recovery_tolerance_db = 3.0;
  const auto rt = optimize_pumps(tight, f, plan, fast_solver());
  const auto rl = optimize_pumps(loose, f, plan, fast_solver());
  REQUIRE(rt.feasible);
  REQUIRE(rl.feasible);
  CHECK(rl.cost_mw <= rt.cost_mw + 1e-9);
}

TEST_CASE("net gain responds monotonically to pump power in the undepleted regime") {
  const FiberSpec f = raman_fiber();
  ChannelPlan plan = band_plan();
  for (auto& c : plan.channels) c.launch_power_mw = 1e-6;  // undepleted
  const double lo = plan.channels.front().center_frequency_thz - 0.01;
  const double hi = plan.channels.back().center_frequency_thz + 0.01;
  PumpSet p1;
  p1.pumps.push_back({1387.0, 100.0, PumpDirection::Backward});
  PumpSet p2;
  p2.pumps.push_back({1387.0, 200.0, PumpDirection::Backward});
  const auto e1 = evaluate_recovery(p1, f, plan, lo, hi, fast_solver());
  const auto e2 = evaluate_recovery(p2, f, plan, lo, hi, fast_solver());
  for (size_t i = 0; i < e1.size(); ++i) CHECK(e2[i] > e1[i]);
}

TEST_CASE("infeasible problems return best effort with the flag") {
  const FiberSpec f = raman_fiber();
  const ChannelPlan plan = band_plan();
  PumpProblem pb = small_problem(plan);
  pb.power_cap_mw = {5.0, 5.0};  // nowhere near enough pump power
  pb.generations = 6;
  const auto rep = optimize_pumps(pb, f, plan, fast_solver());
  CHECK(!rep.feasible);
  for (size_t i = 0; i < rep.pumps.pumps.size(); ++i)
    CHECK(rep.pumps.pumps[i].injection_power_mw <= pb.power_cap_mw[i] + 1e-9);
}
