#include "rgn/gn_closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rgn/gn_integral.hpp"
#include "rgn/quadrature.hpp"

namespace rgn {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

struct PairCoeffs {
  double ups, alpha, kf, kb;
};

PairCoeffs pc(const ChannelTerms& t, int m) {
  const TermEntry& e = t.entries[static_cast<size_t>(m)];
  return {e.upsilon, e.alpha_l, e.kappa_f, e.kappa_b};
}

// Exact finite-window pair integral
//   Re int_{a}^{b} kb kb' (1-e^{-(s-jwv)L})(1-e^{-(s'+jwv)L}) /
//                  ((s-jwv)(s'+jwv)) dv
// used where the analytic blocks are ill-conditioned.
double pair_integral_numeric(double s, double sp, double kb, double kbp, double w, double L,
                             double a, double b) {
  const double turns = std::abs(w) * L * (b - a) / (2.0 * kPi);
  const int panels = std::min(3000, std::max(2, static_cast<int>(2.0 * turns)));
  std::vector<double> sp_nodes;
  for (int p = 1; p < panels; ++p) sp_nodes.push_back(a + (b - a) * p / panels);
  QuadOptions q;
  q.rel_tol = 1e-9;
  q.abs_tol = 1e-18;
  q.max_intervals = panels + 1500;
  return adaptive_gk(
      [&](double v) {
        const cplx d1(s, -w * v), d2(sp, w * v);
        const cplx t1 = 1.0 - std::exp(-d1 * L);
        const cplx t2 = 1.0 - std::exp(-d2 * L);
        return (kb * kbp * t1 * t2 / (d1 * d2)).real();
      },
      a, b, q, sp_nodes);
}

// Analytic in-band pair value over a window [a, b] around the Lorentzian:
// non-oscillatory part exact (atan + log), oscillatory boundary part by the
// infinite-window residue form. Falls back to numeric when ill-conditioned.
double pair_inband(double s, double sp, double kb, double kbp, double kf, double kfp, double w,
                   double L, double a, double b, bool* guarded) {
  const double ssum = s + sp;
  const double amax = std::max(std::abs(s), std::abs(sp));
  const double x_sat = std::abs(w) * std::min(std::abs(a), std::abs(b)) / std::max(amax, 1e-12);
  const double ripple = std::max(std::exp(-std::abs(s) * L), std::exp(-std::abs(sp) * L));
  const bool ill = std::abs(ssum) * L < 1e-3 || std::abs(s) * L < 1e-3 ||
                   std::abs(sp) * L < 1e-3 || x_sat < 4.0 || (ripple > 0.5 && x_sat < 12.0) ||
                   w == 0.0;
  if (ill) {
    if (guarded) *guarded = true;
    return pair_integral_numeric(s, sp, kb, kbp, w, L, a, b);
  }

  // (kb kb' + kf kf') * Re int dv / ((s-jwv)(s'+jwv)); the imaginary log
  // parts of the asymmetric window cancel across the ordered pair sum
  const double at_s = std::atan(w * b / s) - std::atan(w * a / s);
  const double at_sp = std::atan(w * b / sp) - std::atan(w * a / sp);
  const double nonosc = (kb * kbp + kf * kfp) / (w * ssum) * (at_s + at_sp);

  // oscillatory boundary pieces, infinite-window residues:
  //   -kf kb' int e^{+jwLv}/(dd') - kb kf' int e^{-jwLv}/(dd')
  const double aw = std::abs(w);
  const double E = std::exp(-std::abs(s) * L), Ep = std::exp(-std::abs(sp) * L);
  const double sym = kf * kbp + kb * kfp;
  const double asym = kf * kbp - kb * kfp;
  const double osc = -(kPi / (aw * ssum)) * (sym * (sgn(s) * E + sgn(sp) * Ep) +
                                             asym * (E - Ep));
  return nonosc + osc;
}

}  // namespace

double eta_corr_closed(const GnContext& ctx, size_t coi, int n_spans, ClosedFormDiag* diag) {
  if (ctx.terms == nullptr) throw std::invalid_argument("eta_corr_closed: derived terms missing");
  const auto& ch = ctx.plan->channels;
  if (coi >= ch.size()) throw std::invalid_argument("eta_corr_closed: bad channel index");
  const Channel& ci = ch[coi];
  const NliPrefactors pref = nli_prefactors(ctx.scalar_polarization);
  const double L = ctx.span_km;
  const int nt = n_tilde(n_spans);
  const double g2 = ctx.gamma_per_mw_km * ctx.gamma_per_mw_km;

  double sum = 0.0;
  for (size_t k = 0; k < ch.size(); ++k) {
    if (k == coi) continue;
    const Channel& ck = ch[k];
    if (ck.excess_kurtosis == 0.0) continue;
    const double df = ck.center_frequency_thz - ci.center_frequency_thz;
    const double Bk = ck.bandwidth_thz, Bi = ci.bandwidth_thz;
    if (!(2.0 * std::abs(df) > Bk))
      throw std::invalid_argument("eta_corr_closed: overlapping channels");

    const double phi = phi_ik(ctx.disp, ci.center_frequency_thz, ck.center_frequency_thz);
    const double phi_t = std::abs(dispersion_slope_b(ctx.disp, ci.center_frequency_thz,
                                                     ck.center_frequency_thz)) * L;
    const double bracket = coherence_bracket(df, Bk);
    const ChannelTerms& t = ctx.terms->per_channel[k];

    double brace = 0.0;
    for (int m = 0; m < 3; ++m) {
      const PairCoeffs e = pc(t, m);
      for (int p = 0; p < 3; ++p) {
        const PairCoeffs ep = pc(t, p);
        const double uu = e.ups * ep.ups;
        if (uu == 0.0) continue;

        bool guarded = false;
        double inband;
        if (phi != 0.0) {
          const double amax = std::max(std::abs(e.alpha), std::abs(ep.alpha));
          const double x_sat = std::abs(phi) * 0.5 * Bi / std::max(amax, 1e-12);
          const double ripple =
              std::max(std::exp(-std::abs(e.alpha) * L), std::exp(-std::abs(ep.alpha) * L));
          const bool ill = std::abs(e.alpha + ep.alpha) * L < 1e-3 ||
                           std::abs(e.alpha) * L < 1e-3 || std::abs(ep.alpha) * L < 1e-3 ||
                           x_sat < 4.0 || (ripple > 0.5 && x_sat < 12.0);
          if (!ill) {
            const double ssum = e.alpha + ep.alpha;
            // atan block
            inband = 2.0 * (e.kf * ep.kf + e.kb * ep.kb) / (phi * ssum) *
                     (std::atan(phi * Bi / (2.0 * e.alpha)) +
                      std::atan(phi * Bi / (2.0 * ep.alpha)));
            // sign/exponential block (exact antisymmetric pairing)
            const double E = std::exp(-std::abs(e.alpha * L));
            const double Ep = std::exp(-std::abs(ep.alpha * L));
            inband += kPi * (-(e.kf * ep.kb + e.kb * ep.kf) / (phi * ssum) *
                                 (sgn(e.alpha / phi) * E + sgn(ep.alpha / phi) * Ep) +
                             (e.kf * ep.kb - e.kb * ep.kf) / (phi * ssum) *
                                 (sgn(phi) * E + sgn(-phi) * Ep));
          } else {
            guarded = true;
            inband = pair_integral_numeric(e.alpha, ep.alpha, e.kb, ep.kb, phi, L, -0.5 * Bi,
                                           0.5 * Bi);
          }
        } else {
          guarded = true;
          inband = pair_integral_numeric(e.alpha, ep.alpha, e.kb, ep.kb, 0.0, L, -0.5 * Bi,
                                         0.5 * Bi);
        }
        if (guarded && diag) ++diag->guarded_pairs;

        // coherence block: 2 pi n~ (kf-kb)(kf'-kb') / (|phi~| Bk^2 a a') * bracket,
        // with (kf-kb)/a evaluated through expm1 (finite at a -> 0)
        double coh = 0.0;
        if (nt > 0) {
          const double q1 = e.kb * expm1_over(e.alpha, L);
          const double q2 = ep.kb * expm1_over(ep.alpha, L);
          const double phi_t_g = std::max(phi_t, 1e-9);
          coh = 2.0 * kPi * nt * q1 * q2 / (phi_t_g * Bk * Bk) * bracket;
        }
        brace += uu * (n_spans * inband + coh);
      }
    }
    const double pr = ck.launch_power_mw / ci.launch_power_mw;
    sum += ck.excess_kurtosis * (g2 / Bk) * pr * pr * brace;
  }
  return pref.corr * sum;
}

namespace {

// Closed-form XPM island: outer sweep over the interferer band with the
// analytic in-band pair value at each point (exact triangular support through
// the window bounds).
double closed_xpm_island(const GnContext& ctx, const Channel& ci, const Channel& ck,
                         const ChannelTerms& tk, ClosedFormDiag* diag) {
  const double L = ctx.span_km;
  const double Bi = ci.bandwidth_thz, Bk = ck.bandwidth_thz;
  const double df = ck.center_frequency_thz - ci.center_frequency_thz;

  int guard_count = 0;
  auto inner = [&](double nu2) -> double {
    const double a = std::max(-0.5 * Bi, -0.5 * Bk - nu2);
    const double b = std::min(0.5 * Bi, 0.5 * Bk - nu2);
    if (b <= a) return 0.0;
    const double w = dispersion_slope_b(ctx.disp, ci.center_frequency_thz,
                                        ck.center_frequency_thz + nu2) * (df + nu2);
    double acc = 0.0;
    for (int m = 0; m < 3; ++m) {
      const PairCoeffs e = pc(tk, m);
      if (e.ups == 0.0) continue;
      for (int p = 0; p < 3; ++p) {
        const PairCoeffs ep = pc(tk, p);
        if (ep.ups == 0.0) continue;
        bool guarded = false;
        acc += e.ups * ep.ups *
               pair_inband(e.alpha, ep.alpha, e.kb, ep.kb, e.kf, ep.kf, w, L, a, b, &guarded);
        if (guarded) ++guard_count;
      }
    }
    return acc;
  };

  QuadOptions q;
  q.rel_tol = 1e-6;
  q.max_intervals = 300;
  const double val = adaptive_gk(inner, -0.5 * Bk, 0.5 * Bk, q,
                                 {0.5 * (Bk - Bi), -0.5 * (Bk - Bi), 0.0});
  if (diag && guard_count > 0) ++diag->guarded_pairs;
  return val;
}

// Hexagonal-support density of u = nu1 nu2: mixed quadrants contribute
// 2 ln((B/2)^2/u), same-sign quadrants 2 ln(r+/r-) up to u = (B/4)^2.
double hex_density(double u, double B) {
  const double sq = 0.25 * B * B;   // (B/2)^2
  const double tq = 0.0625 * B * B; // (B/4)^2
  double d = 0.0;
  if (u < sq) d += 2.0 * std::log(sq / u);
  if (u < tq) {
    const double r = std::sqrt(tq - u);
    const double rp = 0.25 * B + r, rm = 0.25 * B - r;
    if (rm > 0.0) d += 2.0 * std::log(rp / rm);
  }
  return d;
}

double closed_spm(const GnContext& ctx, const Channel& ci, const ChannelTerms& ti, int n_spans) {
  const double B = ci.bandwidth_thz;
  const double L = ctx.span_km;
  const double w = dispersion_slope_b(ctx.disp, ci.center_frequency_thz,
                                      ci.center_frequency_thz);  // phase slope per u
  const ExpKernel kern = kernel_from_terms(ti, L);
  const double u_max = 0.25 * B * B;
  const double u_tri = 0.0625 * B * B;

  // geometric u-grid resolving both the log singularity and the Lorentzian
  std::vector<double> nodes;
  const double r = std::pow(10.0, -1.0 / 16.0);
  for (double u = u_max; u > u_max * 1e-12; u *= r) nodes.push_back(u);
  nodes.push_back(u_max * 1e-12);
  nodes.push_back(u_tri);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  const size_t nn = nodes.size();
  std::vector<cplx> gS(nn), gR(nn), gRc(nn);
  std::vector<double> th(nn);
  for (size_t i = 0; i < nn; ++i) {
    const double phi = w * nodes[i];
    const double D = hex_density(nodes[i], B);
    gS[i] = D * kern.S(phi);
    gR[i] = D * kern.Rbar(phi);
    gRc[i] = std::conj(gR[i]);
    th[i] = phi * L;
  }
  auto filon_m = [&](const std::vector<cplx>& gv, int mshift) {
    std::vector<double> theta(nn);
    for (size_t i = 0; i < nn; ++i) theta[i] = mshift * th[i];
    return filon_linear(nodes, gv, theta);
  };

  double total = 0.0;
  for (int m = -(n_spans - 1); m <= n_spans - 1; ++m) {
    const double wgt = n_spans - std::abs(m);
    const cplx Tm = filon_m(gS, m) - filon_m(gR, m + 1) - filon_m(gRc, m - 1);
    total += wgt * Tm.real();
  }
  return total;
}

}  // namespace

double eta_gn_closed(const GnContext& ctx, size_t coi, int n_spans, ClosedFormDiag* diag) {
  if (ctx.terms == nullptr) throw std::invalid_argument("eta_gn_closed: derived terms missing");
  if (ctx.gamma_per_mw_km == 0.0) return 0.0;
  const auto& ch = ctx.plan->channels;
  if (coi >= ch.size()) throw std::invalid_argument("eta_gn_closed: bad channel index");
  const Channel& ci = ch[coi];
  const NliPrefactors pref = nli_prefactors(ctx.scalar_polarization);
  const double g2 = ctx.gamma_per_mw_km * ctx.gamma_per_mw_km;

  double eta = pref.gn_spm * g2 / (ci.bandwidth_thz * ci.bandwidth_thz) *
               closed_spm(ctx, ci, ctx.terms->per_channel[coi], n_spans);

  for (size_t k = 0; k < ch.size(); ++k) {
    if (k == coi) continue;
    const Channel& ck = ch[k];
    const double df = ck.center_frequency_thz - ci.center_frequency_thz;
    if (!(2.0 * std::abs(df) > ck.bandwidth_thz))
      throw std::invalid_argument("eta_gn_closed: overlapping channels");
    const double pr = ck.launch_power_mw / ci.launch_power_mw;
    eta += pref.gn_xpm * g2 * pr * pr / (ck.bandwidth_thz * ck.bandwidth_thz) * n_spans *
           closed_xpm_island(ctx, ci, ck, ctx.terms->per_channel[k], diag);
  }
  return eta;
}

NliResult evaluate_nli(const GnContext& ctx, NliBackend backend, int n_spans) {
  NliResult out;
  out.backend = backend == NliBackend::Closed ? "closed" : "integral";
  out.n_spans = n_spans;
  for (size_t i = 0; i < ctx.plan->channels.size(); ++i) {
    NliChannelResult r;
    const Channel& c = ctx.plan->channels[i];
    r.wavelength_nm = nm_from_thz(c.center_frequency_thz);
    if (backend == NliBackend::Closed) {
      ClosedFormDiag diag;
      r.eta_gn = eta_gn_closed(ctx, i, n_spans, &diag);
      r.eta_corr = eta_corr_closed(ctx, i, n_spans, &diag);
      r.guard_flagged = diag.guarded_pairs > 0;
    } else {
      r.eta_gn = eta_gn_integral(ctx, i, n_spans);
      r.eta_corr = eta_corr_integral(ctx, i, n_spans);
    }
    r.eta_total = r.eta_gn + r.eta_corr;
    const SnrResult s = snr_assemble(r.eta_total, c.launch_power_mw);
    r.snr_nli_db = s.snr_nli_db;
    out.per_channel.push_back(r);
  }
  return out;
}

SnrResult snr_assemble(double eta_total_per_mw2, double launch_power_mw,
                       std::optional<double> snr_ase_db, std::optional<double> snr_trx_db) {
  if (!(launch_power_mw > 0.0)) throw std::invalid_argument("snr_assemble: power must be > 0");
  SnrResult r;
  if (!(eta_total_per_mw2 > 0.0)) {
    r.eta_nonpositive = true;
    r.snr_nli_db = std::numeric_limits<double>::quiet_NaN();
    r.snr_total_db = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const double snr_nli = 1.0 / (eta_total_per_mw2 * launch_power_mw * launch_power_mw);
  r.snr_nli_db = db_from_linear(snr_nli);
  double inv = 1.0 / snr_nli;
  if (snr_ase_db) inv += 1.0 / linear_from_db(*snr_ase_db);
  if (snr_trx_db) inv += 1.0 / linear_from_db(*snr_trx_db);
  r.snr_total_db = db_from_linear(1.0 / inv);
  return r;
}

}  // namespace rgn
