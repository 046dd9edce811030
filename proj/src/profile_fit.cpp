#include "rgn/profile_fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rgn/least_squares.hpp"
#include "rgn/units.hpp"

namespace rgn {

namespace {

double model_rho(double T_f, double T_b, double a, double af, double ab, double L, double z) {
  const double T = 1.0 + T_f - T_b * std::exp(-ab * L);
  return T * std::exp(-a * z) - T_f * std::exp(-(a + af) * z) +
         T_b * std::exp(-ab * L) * std::exp(-(a - ab) * z);
}

double db10(double x) { return 10.0 * std::log10(std::max(x, 1e-30)); }

struct SideInit {
  bool active = false;
  double rate0 = 0.0;  // initial decay rate of the side's aggregate power
};

}  // namespace

FitAggregates fit_aggregates(const ChannelPlan& plan, const PumpSet& pumps) {
  FitAggregates a;
  double fw_num = 0.0;
  for (const auto& c : plan.channels) {
    a.P_f_mw += c.launch_power_mw;
    fw_num += c.launch_power_mw * c.center_frequency_thz;
  }
  for (const auto& q : pumps.pumps) {
    if (q.direction == PumpDirection::Forward) {
      a.P_f_mw += q.injection_power_mw;
      fw_num += q.injection_power_mw * q.frequency_thz();
    } else {
      a.P_b_mw += q.injection_power_mw;
    }
  }
  a.f_hat_f_thz = a.P_f_mw > 0.0 ? fw_num / a.P_f_mw : 0.0;
  a.f_hat_b_thz = pumps.side_mean_frequency_thz(PumpDirection::Backward);
  return a;
}

double fitted_rho(const ChannelFit& f, double span_km, double z) {
  return model_rho(f.T_f, f.T_b, f.alpha, f.alpha_f, f.alpha_b, span_km, z);
}

FittedCoeffs fit_profile(const PowerProfile& profile, const ChannelPlan& plan,
                         const PumpSet& pumps, const FitOptions& opts) {
  const double L = profile.span_length_km();
  const auto& z = profile.z_km;
  const size_t nz = z.size();

  FittedCoeffs out;
  out.aggregates = fit_aggregates(plan, pumps);
  out.span_km = L;

  // Forward correction is meaningful when co-propagating power besides the
  // channel itself exists (ISRS or forward pumps); backward when backward
  // pumps carry power.
  size_t n_forward_components = plan.channels.size();
  double forward_pump_mw = 0.0, backward_pump_mw = 0.0;
  for (const auto& q : pumps.pumps) {
    if (q.direction == PumpDirection::Forward) {
      forward_pump_mw += q.injection_power_mw;
      if (q.injection_power_mw > 0.0) ++n_forward_components;
    } else {
      backward_pump_mw += q.injection_power_mw;
    }
  }
  const bool forward_possible = n_forward_components >= 2;
  const bool backward_possible = backward_pump_mw > 0.0;

  // Initial side decay rates from the solved components themselves.
  SideInit fwd, bwd;
  if (forward_possible) {
    double p0 = 0.0, pl = 0.0;
    for (size_t c = 0; c < profile.n_components(); ++c) {
      if (profile.components[c].is_pump &&
          pumps.pumps[static_cast<size_t>(profile.components[c].index)].direction !=
              PumpDirection::Forward)
        continue;
      p0 += profile.power_mw[c].front();
      pl += profile.power_mw[c].back();
    }
    fwd.active = true;
    fwd.rate0 = std::clamp(std::log(std::max(p0, 1e-30) / std::max(pl, 1e-30)) / L, 1e-3, 5.0);
  }
  if (backward_possible) {
    double p0 = 0.0, pl = 0.0;
    for (size_t c = 0; c < profile.n_components(); ++c) {
      if (!profile.components[c].is_pump) continue;
      if (pumps.pumps[static_cast<size_t>(profile.components[c].index)].direction !=
          PumpDirection::Backward)
        continue;
      p0 += profile.power_mw[c].front();
      pl += profile.power_mw[c].back();
    }
    bwd.active = true;
    bwd.rate0 = std::clamp(std::log(std::max(pl, 1e-30) / std::max(p0, 1e-30)) / L, 1e-3, 5.0);
  }

  for (size_t k = 0; k < plan.channels.size(); ++k) {
    const auto& rho = profile.normalized[k];
    std::vector<double> rho_db(nz);
    for (size_t g = 0; g < nz; ++g) rho_db[g] = db10(rho[g]);

    // base attenuation from the early slope (pumps act mostly near z = L)
    size_t q4 = std::max<size_t>(2, nz / 4);
    double a0 = std::clamp((rho_db[0] - rho_db[q4]) / (z[q4] - z[0]) * std::log(10.0) / 10.0,
                           1e-4, 5.0);

    // 1) pure exponential
    auto res_exp = [&](const Eigen::VectorXd& th) {
      Eigen::VectorXd r(static_cast<long>(nz));
      const double a = std::exp(th[0]);
      for (size_t g = 0; g < nz; ++g)
        r[static_cast<long>(g)] = db10(std::exp(-a * z[g])) - rho_db[g];
      return r;
    };
    Eigen::VectorXd t1(1);
    t1[0] = std::log(a0);
    LmOptions lmo;
    lmo.max_iterations = opts.max_iterations;
    LmResult exp_fit = levenberg_marquardt(res_exp, t1, lmo);

    ChannelFit cf;
    cf.alpha = std::exp(exp_fit.theta[0]);
    cf.rms_db = exp_fit.rms;

    const bool need_more = exp_fit.rms > 1e-5 && (fwd.active || bwd.active);
    if (need_more) {
      // theta layout: [ln a, (T_f, ln a_f)?, (T_b, ln a_b)?]
      const bool uf = fwd.active, ub = bwd.active;
      auto unpack = [&](const Eigen::VectorXd& th, double& a, double& Tf, double& af, double& Tb,
                        double& ab) {
        long i = 0;
        a = std::exp(th[i++]);
        Tf = af = Tb = ab = 0.0;
        if (uf) {
          Tf = th[i++];
          af = std::exp(th[i++]);
        }
        if (ub) {
          Tb = th[i++];
          ab = std::exp(th[i++]);
        }
      };
      auto res_full = [&](const Eigen::VectorXd& th) {
        double a, Tf, af, Tb, ab;
        unpack(th, a, Tf, af, Tb, ab);
        Eigen::VectorXd r(static_cast<long>(nz));
        for (size_t g = 0; g < nz; ++g)
          r[static_cast<long>(g)] = db10(model_rho(Tf, Tb, a, af, ab, L, z[g])) - rho_db[g];
        return r;
      };
      const long np = 1 + (uf ? 2 : 0) + (ub ? 2 : 0);
      LmResult best;
      best.rms = 1e300;
      for (int attempt = 0; attempt < 3; ++attempt) {
        Eigen::VectorXd th(np);
        long i = 0;
        th[i++] = std::log(std::max(cf.alpha, 1e-4));
        const double scale = attempt == 0 ? 1.0 : (attempt == 1 ? 2.0 : 0.5);
        if (uf) {
          th[i++] = 0.0;
          th[i++] = std::log(fwd.rate0 * scale);
        }
        if (ub) {
          th[i++] = 0.0;
          th[i++] = std::log(bwd.rate0 * scale);
        }
        LmResult fit = levenberg_marquardt(res_full, th, lmo);
        if (fit.rms < best.rms) best = fit;
        if (best.rms < 1e-4) break;
      }
      if (best.rms < exp_fit.rms) {
        double a, Tf, af, Tb, ab;
        unpack(best.theta, a, Tf, af, Tb, ab);
        cf.alpha = a;
        cf.T_f = Tf;
        cf.alpha_f = af;
        cf.T_b = Tb;
        cf.alpha_b = ab;
        cf.rms_db = best.rms;
        cf.forward_active = uf;
        cf.backward_active = ub;
      }
    }

    // gain-slope coefficients from the side aggregates
    const auto& ag = out.aggregates;
    const double fk = plan.channels[k].center_frequency_thz;
    if (cf.forward_active && ag.P_f_mw > 0.0 && std::abs(fk - ag.f_hat_f_thz) > 1e-9)
      cf.C_f = -cf.T_f * cf.alpha_f / (ag.P_f_mw * (fk - ag.f_hat_f_thz));
    if (cf.backward_active && ag.P_b_mw > 0.0 && std::abs(fk - ag.f_hat_b_thz) > 1e-9)
      cf.C_b = -cf.T_b * cf.alpha_b / (ag.P_b_mw * (fk - ag.f_hat_b_thz));

    cf.converged = cf.rms_db <= opts.residual_ceiling_db;
    out.per_channel.push_back(cf);
  }
  return out;
}

}  // namespace rgn
