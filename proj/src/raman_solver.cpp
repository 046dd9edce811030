#include "rgn/raman_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rgn/ode.hpp"
#include "rgn/units.hpp"

namespace rgn {

namespace {

struct System {
  Eigen::VectorXd alpha;    // power attenuation per component [1/km]
  Eigen::VectorXd dir;      // +1 forward, -1 backward
  Eigen::MatrixXd coupling; // [m][j]: rate of power transfer into m from j, per mW
  int n = 0;

  void rhs(double, const Eigen::VectorXd& p, Eigen::VectorXd& dp) const {
    dp.noalias() = coupling * p;           // net pairwise Raman rate per component
    dp.array() -= alpha.array();
    dp.array() *= p.array();
    dp.array() *= dir.array();
  }
};

System build_system(const FiberSpec& fiber, const std::vector<double>& freqs,
                    const std::vector<int>& dirs, bool zero_raman) {
  System s;
  s.n = static_cast<int>(freqs.size());
  s.alpha.resize(s.n);
  s.dir.resize(s.n);
  s.coupling = Eigen::MatrixXd::Zero(s.n, s.n);
  for (int i = 0; i < s.n; ++i) {
    s.alpha[i] = fiber.alpha_per_km(freqs[i]);
    s.dir[i] = dirs[i];
  }
  if (!zero_raman) {
    for (int m = 0; m < s.n; ++m)
      for (int j = 0; j < s.n; ++j) {
        if (j == m) continue;
        if (freqs[j] > freqs[m]) {
          const double g = fiber.raman_gain(freqs[j], freqs[m]) * 1e-3;  // 1/(mW km)
          s.coupling(m, j) += g;                          // acceptor gain
          // donor loses with the photon-energy ratio on its side
        } else if (freqs[j] < freqs[m]) {
          const double g = fiber.raman_gain(freqs[m], freqs[j]) * 1e-3;
          s.coupling(m, j) -= g * freqs[m] / freqs[j];
        }
      }
  }
  return s;
}

}  // namespace

PowerProfile solve_profile(const FiberSpec& fiber, const ChannelPlan& plan,
                           const PumpSet& pumps, const RamanSolverOptions& opts) {
  if (plan.channels.empty()) throw std::invalid_argument("solve_profile: empty plan");
  const int z_samples = std::max(opts.z_samples, 64);
  const double L = fiber.span_length_km;

  // Component list: channels (optionally represented by spectral bins), then pumps.
  const size_t n_ch = plan.channels.size();
  std::vector<double> freqs;
  std::vector<int> dirs;
  std::vector<double> p0;             // z = 0 state (backward pumps hold trial values)
  std::vector<int> bin_of_channel(n_ch);
  std::vector<double> bin_freq;
  std::vector<double> bin_power;

  if (opts.channel_bin_width_ghz > 0.0) {
    const double w = opts.channel_bin_width_ghz * 1e-3;
    double bin_start = plan.channels.front().center_frequency_thz;
    double fsum = 0.0, psum = 0.0;
    int nbin = 0;
    auto flush = [&]() {
      if (psum > 0.0) {
        bin_freq.push_back(fsum / psum);
        bin_power.push_back(psum);
      }
      fsum = psum = 0.0;
    };
    for (size_t i = 0; i < n_ch; ++i) {
      const auto& c = plan.channels[i];
      if (c.center_frequency_thz - bin_start >= w && psum > 0.0) {
        flush();
        ++nbin;
        bin_start = c.center_frequency_thz;
      }
      bin_of_channel[i] = nbin;
      fsum += c.launch_power_mw * c.center_frequency_thz;
      psum += c.launch_power_mw;
    }
    flush();
  } else {
    for (size_t i = 0; i < n_ch; ++i) {
      bin_of_channel[i] = static_cast<int>(i);
      bin_freq.push_back(plan.channels[i].center_frequency_thz);
      bin_power.push_back(plan.channels[i].launch_power_mw);
    }
  }
  const size_t n_bins = bin_freq.size();
  for (size_t b = 0; b < n_bins; ++b) {
    freqs.push_back(bin_freq[b]);
    dirs.push_back(+1);
    p0.push_back(bin_power[b]);
  }
  std::vector<size_t> backward_idx;
  for (const auto& q : pumps.pumps) {
    freqs.push_back(q.frequency_thz());
    dirs.push_back(q.direction == PumpDirection::Forward ? +1 : -1);
    if (q.direction == PumpDirection::Forward) {
      p0.push_back(q.injection_power_mw);
    } else {
      backward_idx.push_back(p0.size());
      p0.push_back(0.0);  // filled by the shooting loop
    }
  }

  const System sys = build_system(fiber, freqs, dirs, opts.zero_raman);
  std::vector<double> grid(static_cast<size_t>(z_samples));
  for (int i = 0; i < z_samples; ++i) grid[static_cast<size_t>(i)] = L * i / (z_samples - 1);

  OdeOptions ode;
  ode.rel_tol = opts.rel_tol;
  ode.abs_tol = opts.abs_tol;
  ode.h_max = opts.max_step_km;

  std::vector<std::vector<double>> table(freqs.size(), std::vector<double>(grid.size()));
  auto run = [&](const Eigen::VectorXd& start, bool record) -> Eigen::VectorXd {
    Eigen::VectorXd y = start;
    integrate_grid([&](double z, const Eigen::VectorXd& p, Eigen::VectorXd& dp) { sys.rhs(z, p, dp); },
                   y, grid,
                   record ? std::function<void(size_t, const Eigen::VectorXd&)>(
                                [&](size_t gi, const Eigen::VectorXd& p) {
                                  for (size_t c = 0; c < freqs.size(); ++c) table[c][gi] = p[c];
                                })
                          : std::function<void(size_t, const Eigen::VectorXd&)>(),
                   ode);
    return y;
  };

  Eigen::VectorXd start = Eigen::Map<const Eigen::VectorXd>(p0.data(), static_cast<long>(p0.size()));

  // Shooting on the unknown z=0 backward-pump powers, in log domain.
  std::vector<size_t> unknowns;
  std::vector<double> targets;
  {
    size_t bi = 0;
    for (const auto& q : pumps.pumps) {
      if (q.direction != PumpDirection::Backward) continue;
      const size_t idx = backward_idx[bi++];
      if (q.injection_power_mw > 0.0) {
        unknowns.push_back(idx);
        targets.push_back(q.injection_power_mw);
        const double a = fiber.alpha_per_km(q.frequency_thz());
        start[static_cast<long>(idx)] = q.injection_power_mw * std::exp(-a * L);
      }
    }
  }
  if (opts.shooting_guess_mw) {
    if (opts.shooting_guess_mw->size() != unknowns.size())
      throw std::invalid_argument("solve_profile: shooting guess size mismatch");
    for (size_t i = 0; i < unknowns.size(); ++i)
      start[static_cast<long>(unknowns[i])] = std::max(1e-12, (*opts.shooting_guess_mw)[i]);
  }

  const size_t m = unknowns.size();
  if (m > 0) {
    Eigen::VectorXd x(m);  // ln of z=0 powers
    for (size_t i = 0; i < m; ++i) x[static_cast<long>(i)] = std::log(start[static_cast<long>(unknowns[i])]);

    // trial z=0 powers are clamped to a physical window so bad Newton trials
    // cannot blow the integrator up
    std::vector<double> x_hi(m);
    for (size_t i = 0; i < m; ++i) x_hi[i] = std::log(10.0 * targets[i]);
    auto clamp_x = [&](Eigen::VectorXd lx) {
      for (size_t i = 0; i < m; ++i)
        lx[static_cast<long>(i)] = std::clamp(lx[static_cast<long>(i)], std::log(1e-12), x_hi[i]);
      return lx;
    };
    auto residual = [&](const Eigen::VectorXd& lx_in) -> Eigen::VectorXd {
      const Eigen::VectorXd lx = clamp_x(lx_in);
      Eigen::VectorXd s0 = start;
      for (size_t i = 0; i < m; ++i) s0[static_cast<long>(unknowns[i])] = std::exp(lx[static_cast<long>(i)]);
      Eigen::VectorXd yl = run(s0, false);
      Eigen::VectorXd r(m);
      for (size_t i = 0; i < m; ++i) {
        const double pl = yl[static_cast<long>(unknowns[i])];
        if (!(pl > 0.0)) throw std::runtime_error("solve_profile: backward pump power underflow");
        r[static_cast<long>(i)] = std::log(pl / targets[i]);
      }
      return r;
    };

    x = clamp_x(x);
    Eigen::VectorXd r = residual(x);
    bool converged = r.lpNorm<Eigen::Infinity>() < opts.bvp_tol;
    Eigen::MatrixXd J(m, m);
    bool have_jacobian = false;
    int iter = 0;
    while (!converged) {
      if (++iter > opts.bvp_max_iterations)
        throw std::runtime_error("solve_profile: backward-pump BVP did not converge");
      if (!have_jacobian) {
        const double h = 1e-6;
        for (size_t j = 0; j < m; ++j) {
          Eigen::VectorXd xj = x;
          xj[static_cast<long>(j)] += h;
          J.col(static_cast<long>(j)) = (residual(xj) - r) / h;
        }
        have_jacobian = true;
      }
      Eigen::VectorXd step = -J.fullPivLu().solve(r);
      if (!step.allFinite()) step = -r;  // relaxation fallback
      double lambda = 1.0;
      const double rn = r.norm();
      bool accepted = false;
      for (int ls = 0; ls < 7; ++ls) {
        Eigen::VectorXd xn = clamp_x(x + lambda * step);
        Eigen::VectorXd rn2;
        try {
          rn2 = residual(xn);
        } catch (const std::exception&) {
          lambda *= 0.5;  // diverging trial, back off
          continue;
        }
        if (rn2.norm() < rn) {
          // Broyden update keeps the Jacobian fresh between full rebuilds
          Eigen::VectorXd dx = xn - x;
          J += ((rn2 - r) - J * dx) * dx.transpose() / dx.squaredNorm();
          x = xn;
          r = rn2;
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!accepted) {
        // damped relaxation on the boundary mismatch
        x = clamp_x(x - 0.5 * r);
        r = residual(x);
        have_jacobian = false;
      }
      converged = r.lpNorm<Eigen::Infinity>() < opts.bvp_tol;
    }
    for (size_t i = 0; i < m; ++i) start[static_cast<long>(unknowns[i])] = std::exp(x[static_cast<long>(i)]);
  }

  run(start, true);

  PowerProfile prof;
  prof.z_km = grid;
  prof.power_mw.assign(n_ch + pumps.size(), {});
  prof.normalized.assign(n_ch + pumps.size(), {});
  for (size_t i = 0; i < n_ch; ++i) {
    prof.components.push_back({plan.channels[i].center_frequency_thz, false, static_cast<int>(i)});
    const auto& bin = table[static_cast<size_t>(bin_of_channel[i])];
    const double share = plan.channels[i].launch_power_mw / bin.front();
    auto& pw = prof.power_mw[i];
    auto& rho = prof.normalized[i];
    pw.resize(grid.size());
    rho.resize(grid.size());
    for (size_t g = 0; g < grid.size(); ++g) {
      pw[g] = share * bin[g];
      rho[g] = bin[g] / bin.front();
    }
  }
  for (size_t q = 0; q < pumps.size(); ++q) {
    const size_t comp = n_bins + q;
    prof.components.push_back({pumps.pumps[q].frequency_thz(), true, static_cast<int>(q)});
    auto& pw = prof.power_mw[n_ch + q];
    auto& rho = prof.normalized[n_ch + q];
    pw = table[comp];
    rho.resize(grid.size());
    const double ref = pw.front() > 0.0 ? pw.front() : 1.0;
    for (size_t g = 0; g < grid.size(); ++g) {
      if (pw[g] < -1e-9) throw std::runtime_error("solve_profile: negative power underflow");
      rho[g] = pw[g] / ref;
    }
  }
  for (size_t c = 0; c < n_ch; ++c)
    for (double p : prof.power_mw[c])
      if (p < -1e-9) throw std::runtime_error("solve_profile: negative power underflow");
  return prof;
}

double undepleted_onoff_gain_db(const FiberSpec& fiber, const Pump& pump,
                                double signal_frequency_thz) {
  if (pump.injection_power_mw < 0.0) throw std::invalid_argument("pump power must be >= 0");
  const double fp = pump.frequency_thz();
  const double a_p = fiber.alpha_per_km(fp);
  const double L = fiber.span_length_km;
  const double leff = (1.0 - std::exp(-a_p * L)) / a_p;
  double g;  // 1/(mW km), signed by transfer direction
  if (fp > signal_frequency_thz)
    g = fiber.raman_gain(fp, signal_frequency_thz) * 1e-3;
  else
    g = -fiber.raman_gain(signal_frequency_thz, fp) * 1e-3 * signal_frequency_thz / fp;
  const double gain_np = g * pump.injection_power_mw * leff;
  return gain_np * 10.0 / std::log(10.0);
}

}  // namespace rgn
