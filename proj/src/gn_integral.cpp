#include "rgn/gn_integral.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "rgn/link_function.hpp"
#include "rgn/quadrature.hpp"

namespace rgn {

namespace {

// Raw-profile kernel of one channel as a piecewise-exponential mu evaluator.
struct RawKernel {
  std::vector<double> z;
  std::vector<double> K;      // rho(f_k, z)
  std::vector<double> lnK;
  double mu_dc = 0.0;

  explicit RawKernel(const PowerProfile& p, double f_thz) {
    z = p.z_km;
    K.resize(z.size());
    lnK.resize(z.size());
    for (size_t i = 0; i < z.size(); ++i) {
      K[i] = std::max(p.rho_at(f_thz, z[i]), 1e-300);
      lnK[i] = std::log(K[i]);
    }
    mu_dc = std::abs(mu(0.0));
  }

  cplx mu(double phi) const {
    cplx acc = 0.0;
    for (size_t i = 0; i + 1 < z.size(); ++i) {
      const double h = z[i + 1] - z[i];
      const double s = (lnK[i] - lnK[i + 1]) / h;
      acc += K[i] * std::exp(cplx(0.0, phi * z[i])) * h * one_minus_exp_over(cplx(s, -phi) * h);
    }
    return acc;
  }
};

struct IslandGeom {
  double f_i, f_k, B_i, B_k;
  double df;  // f_k - f_i (0 for SPM)
};

// nu1 window at fixed nu2 from the third-leg support |nu1 + nu2| <= B_k/2.
bool nu1_window(const IslandGeom& g, double nu2, double& a, double& b) {
  a = std::max(-0.5 * g.B_i, -0.5 * g.B_k - nu2);
  b = std::min(0.5 * g.B_i, 0.5 * g.B_k - nu2);
  return b > a;
}

// Fitted-kernel inner integral over nu1 with the span-count weight
// sum_{|m|<n} (n-|m|) e^{j m phi L}: the m = 0 part splits into a smooth
// adaptive piece S and a Filon ripple piece; every m != 0 piece is a Filon
// integral of a smooth factor.
double inner_fitted(const ExpKernel& kern, const GnContext& ctx, const IslandGeom& g,
                    double nu2, int n_spans) {
  double a, b;
  if (!nu1_window(g, nu2, a, b)) return 0.0;
  const double L = kern.span();
  auto phase = [&](double nu1) {
    return phi_exact(ctx.disp, g.f_i + nu1, g.f_k + nu2, g.f_i);
  };
  const double slope = std::abs(dispersion_slope_b(ctx.disp, g.f_i, g.f_k + nu2) *
                                (g.df + nu2));
  const double scale = slope > 0.0 ? kern.min_rate() / slope : (b - a);

  QuadOptions q;
  q.rel_tol = ctx.quad_rel_tol;
  q.max_intervals = 2000;
  double total = n_spans * adaptive_gk([&](double nu1) { return kern.S(phase(nu1)); }, a, b, q,
                                       {0.0, 0.5 * (a + b)});

  const std::vector<double> nodes = graded_nodes(a, b, 0.0, scale, 384);
  std::vector<cplx> gS(nodes.size()), gR(nodes.size()), gRc(nodes.size());
  std::vector<double> th(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) {
    const double phi = phase(nodes[i]);
    gS[i] = kern.S(phi);
    gR[i] = kern.Rbar(phi);
    gRc[i] = std::conj(gR[i]);
    th[i] = phi * L;
  }
  auto filon_m = [&](const std::vector<cplx>& gv, int mshift) {
    std::vector<double> theta(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) theta[i] = mshift * th[i];
    return filon_linear(nodes, gv, theta);
  };
  // m = 0 ripple
  total -= n_spans * 2.0 * filon_m(gR, 1).real();
  for (int m = 1; m < n_spans; ++m) {
    const cplx Tm = filon_m(gS, m) - filon_m(gR, m + 1) - filon_m(gRc, m - 1);
    total += 2.0 * (n_spans - m) * Tm.real();
  }
  return total;
}

// Raw-kernel inner integral: direct |mu|^2 with chi, presplit at the ripple
// period. Desk-scale tool; accuracy is capped by max_intervals.
double inner_raw(const RawKernel& kern, const GnContext& ctx, const IslandGeom& g,
                 double nu2, int n_spans, double span_km) {
  double a, b;
  if (!nu1_window(g, nu2, a, b)) return 0.0;
  auto phase = [&](double nu1) {
    return phi_exact(ctx.disp, g.f_i + nu1, g.f_k + nu2, g.f_i);
  };
  const double slope = std::abs(dispersion_slope_b(ctx.disp, g.f_i, g.f_k + nu2) * (g.df + nu2));
  const double turns = slope * span_km * std::max(1, n_spans) * (b - a) / (2.0 * kPi);
  const int panels = std::min(3000, std::max(4, static_cast<int>(2.0 * turns)));
  std::vector<double> splits;
  for (int p = 1; p < panels; ++p) splits.push_back(a + (b - a) * p / panels);
  QuadOptions q;
  q.rel_tol = std::max(ctx.quad_rel_tol, 1e-5);
  q.max_intervals = panels + 2000;
  return adaptive_gk(
      [&](double nu1) {
        const double phi = phase(nu1);
        const double m2 = std::norm(kern.mu(phi));
        return n_spans == 1 ? m2 : m2 * chi_factor(phi * span_km, n_spans);
      },
      a, b, q, splits);
}

double island_integral(const GnContext& ctx, const IslandGeom& g, size_t kernel_channel,
                       int n_spans) {
  QuadOptions outer;
  outer.rel_tol = 10.0 * ctx.quad_rel_tol;
  outer.max_intervals = 400;
  std::vector<double> splits{0.0, 0.5 * (g.B_k - g.B_i), -0.5 * (g.B_k - g.B_i)};

  if (!ctx.use_raw_profile) {
    if (ctx.terms == nullptr) throw std::invalid_argument("eta_gn_integral: fitted terms missing");
    const ExpKernel kern = kernel_from_terms(ctx.terms->per_channel[kernel_channel], ctx.span_km);
    return adaptive_gk([&](double nu2) { return inner_fitted(kern, ctx, g, nu2, n_spans); },
                       -0.5 * g.B_k, 0.5 * g.B_k, outer, splits);
  }
  if (ctx.profile == nullptr) throw std::invalid_argument("eta_gn_integral: raw profile missing");
  const RawKernel kern(*ctx.profile, ctx.plan->channels[kernel_channel].center_frequency_thz);
  outer.max_intervals = 160;
  return adaptive_gk([&](double nu2) { return inner_raw(kern, ctx, g, nu2, n_spans, ctx.span_km); },
                     -0.5 * g.B_k, 0.5 * g.B_k, outer, splits);
}

// Full FWM set: every ordered channel pair (c1, c2) with the third leg inside
// any channel c3; exact leg frequencies through the profile surface.
double eta_gn_exact(const GnContext& ctx, size_t coi, int n_spans) {
  const auto& ch = ctx.plan->channels;
  if (ch.size() > 16)
    throw std::invalid_argument("eta_gn_integral: exact FWM mode is desk-scale (<= 16 channels)");
  const Channel& ci = ch[coi];

  std::unique_ptr<ProfileSourceBase> src_holder;
  if (ctx.use_raw_profile) {
    if (ctx.profile == nullptr) throw std::invalid_argument("exact FWM: raw profile missing");
    src_holder = std::make_unique<RawProfileSource>(*ctx.profile);
  } else {
    if (ctx.terms == nullptr) throw std::invalid_argument("exact FWM: fitted terms missing");
    src_holder = std::make_unique<FittedProfileSource>(*ctx.terms, *ctx.plan);
  }
  const ProfileSourceBase& src = *src_holder;
  LinkFunctionSpec lf;
  lf.source = &src;
  lf.disp = ctx.disp;
  lf.span_km = ctx.span_km;
  lf.normalized = true;

  const NliPrefactors pref = nli_prefactors(ctx.scalar_polarization);
  double acc = 0.0;
  QuadOptions inner_q;
  inner_q.rel_tol = std::max(ctx.quad_rel_tol, 1e-5);
  inner_q.max_intervals = 1200;
  QuadOptions outer_q;
  outer_q.rel_tol = std::max(10.0 * ctx.quad_rel_tol, 1e-4);
  outer_q.max_intervals = 120;

  for (size_t a = 0; a < ch.size(); ++a) {
    for (size_t b = 0; b < ch.size(); ++b) {
      const Channel& c1 = ch[a];
      const Channel& c2 = ch[b];
      const double g12 = (c1.launch_power_mw / c1.bandwidth_thz) *
                         (c2.launch_power_mw / c2.bandwidth_thz);
      double pair_val = 0.0;
      pair_val = adaptive_gk(
          [&](double f2) {
            double inner = 0.0;
            for (const Channel& c3 : ch) {
              // f1 + f2 - f_i in c3  =>  f1 in [c3.lo, c3.hi] - (f2 - f_i)
              const double shift = f2 - ci.center_frequency_thz;
              const double lo = std::max(c1.center_frequency_thz - 0.5 * c1.bandwidth_thz,
                                         c3.center_frequency_thz - 0.5 * c3.bandwidth_thz - shift);
              const double hi = std::min(c1.center_frequency_thz + 0.5 * c1.bandwidth_thz,
                                         c3.center_frequency_thz + 0.5 * c3.bandwidth_thz - shift);
              if (hi <= lo) continue;
              const double g3 = c3.launch_power_mw / c3.bandwidth_thz;
              const double slope =
                  std::abs(dispersion_slope_b(ctx.disp, ci.center_frequency_thz, f2) *
                           (f2 - ci.center_frequency_thz)) +
                  1e-3;
              const double turns =
                  slope * ctx.span_km * std::max(1, n_spans) * (hi - lo) / (2.0 * kPi);
              const int panels = std::min(1500, std::max(2, static_cast<int>(2.0 * turns)));
              std::vector<double> sp;
              for (int p = 1; p < panels; ++p) sp.push_back(lo + (hi - lo) * p / panels);
              inner += g3 * adaptive_gk(
                                [&](double f1) {
                                  const cplx mu =
                                      link_function(f1, f2, ci.center_frequency_thz, lf);
                                  const double m2 = std::norm(mu);
                                  if (n_spans == 1) return m2;
                                  const double x =
                                      phi_exact(ctx.disp, f1, f2, ci.center_frequency_thz) *
                                      ctx.span_km;
                                  return m2 * chi_factor(x, n_spans);
                                },
                                lo, hi, inner_q, sp);
            }
            return inner;
          },
          c2.center_frequency_thz - 0.5 * c2.bandwidth_thz,
          c2.center_frequency_thz + 0.5 * c2.bandwidth_thz, outer_q);
      acc += g12 * pair_val;
    }
  }
  const double g2 = ctx.gamma_per_mw_km * ctx.gamma_per_mw_km;
  return pref.gn_spm * g2 * acc * ci.bandwidth_thz /
         (ci.launch_power_mw * ci.launch_power_mw * ci.launch_power_mw);
}

}  // namespace

double eta_corr_integral(const GnContext& ctx, size_t coi, int n_spans) {
  const auto& ch = ctx.plan->channels;
  if (coi >= ch.size()) throw std::invalid_argument("eta_corr_integral: bad channel index");
  const Channel& ci = ch[coi];
  const NliPrefactors pref = nli_prefactors(ctx.scalar_polarization);
  const int nt = n_tilde(n_spans);
  const double g2 = ctx.gamma_per_mw_km * ctx.gamma_per_mw_km;

  double sum = 0.0;
  for (size_t k = 0; k < ch.size(); ++k) {
    if (k == coi) continue;
    const Channel& ck = ch[k];
    if (ck.excess_kurtosis == 0.0) continue;
    const double df = ck.center_frequency_thz - ci.center_frequency_thz;
    if (!(2.0 * std::abs(df) > ck.bandwidth_thz))
      throw std::invalid_argument("eta_corr_integral: overlapping channels");

    auto phase = [&](double f1) {
      return phi_exact(ctx.disp, ci.center_frequency_thz + f1, ck.center_frequency_thz,
                       ci.center_frequency_thz);
    };
    const double a = -0.5 * ci.bandwidth_thz, b = 0.5 * ci.bandwidth_thz;
    double I1 = 0.0, mu_dc_sq = 0.0;

    if (!ctx.use_raw_profile) {
      if (ctx.terms == nullptr) throw std::invalid_argument("eta_corr_integral: fitted terms missing");
      const ExpKernel kern = kernel_from_terms(ctx.terms->per_channel[k], ctx.span_km);
      QuadOptions q;
      q.rel_tol = ctx.quad_rel_tol;
      q.max_intervals = 2500;
      I1 = adaptive_gk([&](double f1) { return kern.S(phase(f1)); }, a, b, q, {0.0});
      const double slope = std::abs(phi_ik(ctx.disp, ci.center_frequency_thz,
                                           ck.center_frequency_thz));
      const std::vector<double> nodes =
          graded_nodes(a, b, 0.0, slope > 0 ? kern.min_rate() / slope : (b - a), 384);
      std::vector<cplx> gR(nodes.size());
      std::vector<double> th(nodes.size());
      for (size_t i = 0; i < nodes.size(); ++i) {
        const double phi = phase(nodes[i]);
        gR[i] = kern.Rbar(phi);
        th[i] = phi * ctx.span_km;
      }
      I1 -= 2.0 * filon_linear(nodes, gR, th).real();
      mu_dc_sq = kern.mu_dc() * kern.mu_dc();
    } else {
      if (ctx.profile == nullptr) throw std::invalid_argument("eta_corr_integral: raw profile missing");
      const RawKernel kern(*ctx.profile, ck.center_frequency_thz);
      const double slope = std::abs(phi_ik(ctx.disp, ci.center_frequency_thz,
                                           ck.center_frequency_thz));
      const double turns = slope * ctx.span_km * (b - a) / (2.0 * kPi);
      const int panels = std::min(4000, std::max(4, static_cast<int>(2.0 * turns)));
      std::vector<double> sp;
      for (int p = 1; p < panels; ++p) sp.push_back(a + (b - a) * p / panels);
      QuadOptions q;
      q.rel_tol = std::max(ctx.quad_rel_tol, 1e-5);
      q.max_intervals = panels + 2000;
      I1 = adaptive_gk([&](double f1) { return std::norm(kern.mu(phase(f1))); }, a, b, q, sp);
      mu_dc_sq = kern.mu_dc * kern.mu_dc;
    }

    double I2 = 0.0;
    if (nt > 0) {
      const double phi_t = std::abs(dispersion_slope_b(ctx.disp, ci.center_frequency_thz,
                                                       ck.center_frequency_thz)) *
                           ctx.span_km;
      const double phi_t_guarded = std::max(phi_t, 1e-9);
      I2 = mu_dc_sq * (2.0 * kPi * nt / (phi_t_guarded * ck.bandwidth_thz * ck.bandwidth_thz)) *
           coherence_bracket(df, ck.bandwidth_thz);
    }
    const double pr = ck.launch_power_mw / ci.launch_power_mw;
    sum += ck.excess_kurtosis * (g2 / ck.bandwidth_thz) * pr * pr * (n_spans * I1 + I2);
  }
  return pref.corr * sum;
}

double eta_gn_integral(const GnContext& ctx, size_t coi, int n_spans) {
  const auto& ch = ctx.plan->channels;
  if (coi >= ch.size()) throw std::invalid_argument("eta_gn_integral: bad channel index");
  if (ctx.gamma_per_mw_km == 0.0) return 0.0;
  if (ctx.exact_fwm) return eta_gn_exact(ctx, coi, n_spans);

  const Channel& ci = ch[coi];
  const NliPrefactors pref = nli_prefactors(ctx.scalar_polarization);
  const double g2 = ctx.gamma_per_mw_km * ctx.gamma_per_mw_km;

  // SPM island
  IslandGeom spm{ci.center_frequency_thz, ci.center_frequency_thz, ci.bandwidth_thz,
                 ci.bandwidth_thz, 0.0};
  double eta = pref.gn_spm * g2 / (ci.bandwidth_thz * ci.bandwidth_thz) *
               island_integral(ctx, spm, coi, n_spans);

  // XPM islands
  for (size_t k = 0; k < ch.size(); ++k) {
    if (k == coi) continue;
    const Channel& ck = ch[k];
    const double df = ck.center_frequency_thz - ci.center_frequency_thz;
    if (!(2.0 * std::abs(df) > ck.bandwidth_thz))
      throw std::invalid_argument("eta_gn_integral: overlapping channels");
    IslandGeom g{ci.center_frequency_thz, ck.center_frequency_thz, ci.bandwidth_thz,
                 ck.bandwidth_thz, df};
    const double pr = ck.launch_power_mw / ci.launch_power_mw;
    eta += pref.gn_xpm * g2 * pr * pr / (ck.bandwidth_thz * ck.bandwidth_thz) *
           island_integral(ctx, g, k, n_spans);
  }
  return eta;
}

}  // namespace rgn
