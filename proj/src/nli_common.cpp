#include "rgn/nli_common.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rgn {

cplx one_minus_exp_over(cplx w) {
  if (std::abs(w) < 1e-4) {
    return 1.0 - w * (0.5 - w * (1.0 / 6.0 - w * (1.0 / 24.0)));
  }
  return (1.0 - std::exp(-w)) / w;
}

double expm1_over(double a, double L) {
  const double w = a * L;
  if (std::abs(w) < 1e-6) return -L * (1.0 - 0.5 * w + w * w / 6.0);
  return std::expm1(-w) / a;
}

ExpKernel::ExpKernel(std::vector<ExpTerm> terms, double span_km)
    : terms_(std::move(terms)), L_(span_km) {
  mu_dc_ = 0.0;
  s_min_abs_ = 1e300;
  for (const auto& t : terms_) {
    emL_.push_back(std::exp(-t.s * L_));
    mu_dc_ += -t.c * expm1_over(t.s, L_);
    s_min_abs_ = std::min(s_min_abs_, std::max(std::abs(t.s), 1e-4));
  }
}

cplx ExpKernel::mu(double phi) const {
  cplx acc = 0.0;
  for (const auto& t : terms_) {
    const cplx w = cplx(t.s, -phi) * L_;
    acc += t.c * L_ * one_minus_exp_over(w);
  }
  return acc;
}

double ExpKernel::S(double phi) const {
  cplx acc = 0.0;
  const size_t n = terms_.size();
  for (size_t m = 0; m < n; ++m)
    for (size_t p = 0; p < n; ++p) {
      const cplx dm(terms_[m].s, -phi);
      const cplx dp(terms_[p].s, phi);
      acc += terms_[m].c * terms_[p].c * (1.0 + emL_[m] * emL_[p]) / (dm * dp);
    }
  return acc.real();
}

cplx ExpKernel::Rbar(double phi) const {
  cplx acc = 0.0;
  const size_t n = terms_.size();
  for (size_t m = 0; m < n; ++m)
    for (size_t p = 0; p < n; ++p) {
      const cplx dm(terms_[m].s, -phi);
      const cplx dp(terms_[p].s, phi);
      acc += terms_[m].c * terms_[p].c * emL_[m] / (dm * dp);
    }
  return acc;
}

double ExpKernel::mu_sq(double phi) const {
  // |mu|^2 directly; safe at any phi including the near-singular d -> 0
  return std::norm(mu(phi));
}

cplx filon_linear(const std::vector<double>& x, const std::vector<cplx>& g,
                  const std::vector<double>& theta) {
  cplx total = 0.0;
  for (size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    if (h <= 0.0) continue;
    const double c = (theta[i + 1] - theta[i]) / h;
    const cplx g0 = g[i], dg = g[i + 1] - g[i];
    const double ch = c * h;
    cplx E0, E1;
    if (std::abs(ch) < 1e-4) {
      const cplx jc(0.0, ch);
      E0 = h * (1.0 + jc * 0.5 + jc * jc * (1.0 / 6.0));
      E1 = h * (0.5 + jc / 3.0 + jc * jc * 0.125);
    } else {
      const cplx ejk = std::exp(cplx(0.0, ch));
      const cplx jc(0.0, c);
      E0 = (ejk - 1.0) / jc;
      E1 = (h * ejk) / (jc * h) - (ejk - 1.0) / (jc * jc * h);
    }
    total += std::exp(cplx(0.0, theta[i])) * (g0 * E0 + dg * E1);
  }
  return total;
}

std::vector<double> graded_nodes(double a, double b, double focus, double scale,
                                 int max_nodes) {
  std::vector<double> nodes{a, b};
  scale = std::max(scale, (b - a) * 1e-9);
  if (focus > a && focus < b) nodes.push_back(focus);
  for (double d = scale * 0.25; d < (b - a); d *= 1.35) {
    const double lo = focus - d, hi = focus + d;
    if (lo > a) nodes.push_back(lo);
    if (hi < b) nodes.push_back(hi);
    if (static_cast<int>(nodes.size()) > max_nodes - 32) break;
  }
  // cap the coarsest spacing
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<double> out;
  const double hmax = (b - a) / 24.0;
  out.push_back(nodes.front());
  for (size_t i = 1; i < nodes.size(); ++i) {
    const double prev = out.back();
    const double next = nodes[i];
    const int extra = static_cast<int>((next - prev) / hmax);
    for (int e = 1; e <= extra; ++e) out.push_back(prev + (next - prev) * e / (extra + 1));
    out.push_back(next);
  }
  return out;
}

double chi_factor(double x, int n) {
  const double s = std::sin(0.5 * x);
  if (std::abs(s) < 1e-9) {
    // near a grating lobe: chi -> n^2 with a parabolic correction
    const double t = 0.5 * x - kPi * std::round(0.5 * x / kPi);
    const double sn = std::sin(0.5 * n * x);
    if (std::abs(t) < 1e-12) return static_cast<double>(n) * n;
    return (sn * sn) / (t * t);
  }
  const double sn = std::sin(0.5 * n * x);
  return (sn * sn) / (s * s);
}

double dispersion_slope_b(const DispersionCtx& d, double f_i, double f_k) {
  const double fi = f_i - d.f_ref_thz, fk = f_k - d.f_ref_thz;
  return -4.0 * kPi * kPi * (d.beta2 + kPi * d.beta3 * (fi + fk));
}

double phi_ik(const DispersionCtx& d, double f_i, double f_k) {
  return (f_k - f_i) * dispersion_slope_b(d, f_i, f_k);
}

double phi_exact(const DispersionCtx& d, double f1, double f2, double f3) {
  const double g1 = f1 - d.f_ref_thz, g2 = f2 - d.f_ref_thz;
  return -4.0 * kPi * kPi * (f1 - f3) * (f2 - f3) * (d.beta2 + kPi * d.beta3 * (g1 + g2));
}

double coherence_bracket(double delta_f, double B) {
  const double a = 2.0 * std::abs(delta_f);
  if (a < B) throw std::invalid_argument("coherence_bracket: overlapping channels (2|df| < B)");
  const double lo = a - B;
  if (lo < 1e-15 * B) return 2.0 * B;  // removable limit
  return lo * std::log(lo / (a + B)) + 2.0 * B;
}

ExpKernel kernel_from_terms(const ChannelTerms& t, double span_km) {
  std::vector<ExpTerm> terms;
  for (const auto& e : t.entries) {
    const double c = e.upsilon * e.kappa_b;
    if (c != 0.0) terms.push_back({c, e.alpha_l});
  }
  if (terms.empty()) terms.push_back({1.0, 1e-6});
  return ExpKernel(std::move(terms), span_km);
}

int n_tilde(int n_spans) { return n_spans == 1 ? 0 : n_spans; }

}  // namespace rgn
