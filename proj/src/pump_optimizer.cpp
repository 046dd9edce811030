#include "rgn/pump_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "rgn/units.hpp"

namespace rgn {

namespace {

struct EvalResult {
  double cost = 0.0;
  double max_violation_db = 0.0;
  double penalty = 0.0;
  bool feasible = false;
  bool solver_failed = false;
};

PumpSet make_pump_set(const PumpProblem& pb, const std::vector<double>& powers) {
  PumpSet ps;
  for (size_t i = 0; i < pb.candidate_wavelengths_nm.size(); ++i)
    ps.pumps.push_back({pb.candidate_wavelengths_nm[i], powers[i], PumpDirection::Backward});
  return ps;
}

std::vector<size_t> band_channels(const ChannelPlan& plan, double lo, double hi) {
  std::vector<size_t> idx;
  for (size_t i = 0; i < plan.channels.size(); ++i) {
    const double f = plan.channels[i].center_frequency_thz;
    if (f >= lo && f <= hi) idx.push_back(i);
  }
  return idx;
}

}  // namespace

std::vector<double> evaluate_recovery(const PumpSet& pumps, const FiberSpec& fiber,
                                      const ChannelPlan& plan, double band_lo_thz,
                                      double band_hi_thz, const RamanSolverOptions& solver_opts) {
  const PowerProfile prof = solve_profile(fiber, plan, pumps, solver_opts);
  std::vector<double> err;
  for (size_t i : band_channels(plan, band_lo_thz, band_hi_thz))
    err.push_back(db_from_linear(prof.normalized[i].back()));
  return err;
}

PumpOptimizationReport optimize_pumps(const PumpProblem& pb, const FiberSpec& fiber,
                                      const ChannelPlan& plan,
                                      const RamanSolverOptions& solver_opts) {
  const size_t np = pb.candidate_wavelengths_nm.size();
  if (np == 0) throw std::invalid_argument("optimize_pumps: no candidate wavelengths");
  if (pb.power_cap_mw.size() != np)
    throw std::invalid_argument("optimize_pumps: cap list size mismatch");

  PumpOptimizationReport report;
  const std::vector<size_t> targets = band_channels(plan, pb.band_lo_thz, pb.band_hi_thz);
  if (targets.empty()) {
    // unconstrained minimum: all pumps off
    report.pumps = make_pump_set(pb, std::vector<double>(np, 0.0));
    report.feasible = true;
    report.cost_mw = 0.0;
    report.trace.push_back({0, 0.0, 0.0, true});
    return report;
  }

  int evals = 0;
  auto evaluate = [&](const std::vector<double>& powers) -> EvalResult {
    EvalResult r;
    for (double p : powers) r.cost += p;
    try {
      const std::vector<double> err =
          evaluate_recovery(make_pump_set(pb, powers), fiber, plan, pb.band_lo_thz,
                            pb.band_hi_thz, solver_opts);
      double violation = 0.0;
      if (pb.band_average) {
        double mean = 0.0;
        for (double e : err) mean += e;
        mean /= static_cast<double>(err.size());
        violation = std::max(0.0, std::abs(mean) - pb.recovery_tolerance_db);
        r.max_violation_db = std::abs(mean);
      } else {
        for (double e : err) {
          violation = std::max(violation, std::max(0.0, std::abs(e) - pb.recovery_tolerance_db));
          r.max_violation_db = std::max(r.max_violation_db, std::abs(e));
        }
      }
      r.feasible = violation == 0.0;
      r.penalty = r.cost + 2e4 * violation * violation + 2e2 * violation;
    } catch (const std::exception&) {
      r.solver_failed = true;
      r.penalty = 1e12;
    }
    return r;
  };

  const int n_threads = pb.threads > 0
                            ? pb.threads
                            : std::max(1u, std::thread::hardware_concurrency());
  auto evaluate_batch = [&](const std::vector<std::vector<double>>& batch) {
    std::vector<EvalResult> out(batch.size());
    size_t next = 0;
    std::mutex mtx;
    auto worker = [&]() {
      for (;;) {
        size_t i;
        {
          std::lock_guard<std::mutex> lk(mtx);
          if (next >= batch.size()) return;
          i = next++;
        }
        out[i] = evaluate(batch[i]);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min<int>(n_threads, static_cast<int>(batch.size())); ++t)
      pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    evals += static_cast<int>(batch.size());
    return out;
  };

  std::mt19937_64 rng(pb.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  // population: caps, fractions of caps, random points
  const int pop_n = std::max(6, pb.population);
  std::vector<std::vector<double>> pop;
  pop.push_back(pb.power_cap_mw);
  for (double frac : {0.75, 0.5, 0.25}) {
    std::vector<double> x(np);
    for (size_t i = 0; i < np; ++i) x[i] = frac * pb.power_cap_mw[i];
    pop.push_back(x);
  }
  while (static_cast<int>(pop.size()) < pop_n) {
    std::vector<double> x(np);
    for (size_t i = 0; i < np; ++i) x[i] = uni(rng) * pb.power_cap_mw[i];
    pop.push_back(x);
  }
  std::vector<EvalResult> fit = evaluate_batch(pop);

  auto record_incumbent = [&](int iter, const EvalResult& r) {
    if (!r.feasible) return;
    if (report.trace.empty() || !report.feasible || r.cost < report.cost_mw - 1e-12) {
      report.feasible = true;
      report.cost_mw = r.cost;
      report.trace.push_back({iter, r.cost, r.max_violation_db, true});
    }
  };
  std::vector<double> best_x = pop[0];
  EvalResult best = fit[0];
  auto consider = [&](int iter, const std::vector<double>& x, const EvalResult& r) {
    const bool better = (r.feasible && !best.feasible) ||
                        (r.feasible == best.feasible && r.penalty < best.penalty);
    if (better) {
      best = r;
      best_x = x;
    }
    if (r.feasible && (!report.feasible || r.cost <= report.cost_mw)) {
      record_incumbent(iter, r);
      if (r.cost <= report.cost_mw) report.pumps = make_pump_set(pb, x);
    }
  };
  for (size_t i = 0; i < pop.size(); ++i) consider(0, pop[i], fit[i]);

  // differential evolution, rand/1/bin with bound clamping
  for (int gen = 1; gen <= pb.generations; ++gen) {
    std::vector<std::vector<double>> trial(pop.size());
    for (size_t i = 0; i < pop.size(); ++i) {
      size_t a = rng() % pop.size(), b = rng() % pop.size(), c = rng() % pop.size();
      const double F = 0.5 + 0.3 * uni(rng);
      std::vector<double> x = pop[i];
      const size_t jrand = rng() % np;
      for (size_t j = 0; j < np; ++j) {
        if (j == jrand || uni(rng) < 0.8) {
          double v = pop[a][j] + F * (pop[b][j] - pop[c][j]);
          x[j] = std::clamp(v, 0.0, pb.power_cap_mw[j]);
        }
      }
      trial[i] = std::move(x);
    }
    std::vector<EvalResult> tfit = evaluate_batch(trial);
    for (size_t i = 0; i < pop.size(); ++i) {
      const bool accept = (tfit[i].feasible && !fit[i].feasible) ||
                          (tfit[i].feasible == fit[i].feasible &&
                           tfit[i].penalty <= fit[i].penalty);
      if (accept) {
        pop[i] = trial[i];
        fit[i] = tfit[i];
      }
      consider(gen, pop[i], fit[i]);
    }
  }

  // coordinate descent on the feasible incumbent: shrink pumps one at a time
  if (report.feasible) {
    std::vector<double> x(np);
    for (size_t i = 0; i < np; ++i) x[i] = report.pumps.pumps[i].injection_power_mw;
    double step = 0.12;
    int iter = pb.generations;
    for (int d = 0; d < pb.descent_steps && step > 1e-3; ++d) {
      bool improved = false;
      for (size_t j = 0; j < np; ++j) {
        if (x[j] <= 0.0) continue;
        std::vector<double> xt = x;
        xt[j] = std::max(0.0, xt[j] * (1.0 - step));
        const EvalResult r = evaluate(xt);
        ++evals;
        if (r.feasible) {
          x = xt;
          improved = true;
          consider(++iter, x, r);
        }
      }
      if (!improved) step *= 0.5;
    }
  }

  if (!report.feasible) {
    // best-effort result with the infeasibility flag
    report.pumps = make_pump_set(pb, best_x);
    report.cost_mw = best.cost;
    report.trace.push_back({pb.generations, best.cost, best.max_violation_db, false});
  }
  report.per_channel_error_db = evaluate_recovery(report.pumps, fiber, plan, pb.band_lo_thz,
                                                  pb.band_hi_thz, solver_opts);
  report.evaluations = evals;
  return report;
}

}  // namespace rgn
