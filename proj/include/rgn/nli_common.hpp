#pragma once

#include <complex>
#include <vector>

#include "rgn/channel_plan.hpp"
#include "rgn/derived_terms.hpp"
#include "rgn/power_profile.hpp"
#include "rgn/units.hpp"

namespace rgn {

using cplx = std::complex<double>;

// c * e^(-s z) component of a power-profile model.
struct ExpTerm {
  double c = 0.0;
  double s = 0.0;
};

// Pairwise machinery of a sum-of-exponentials kernel over one span:
//   mu(phi)    = sum_m c_m (1 - e^(-(s_m - j phi) L)) / (s_m - j phi)
//   |mu(phi)|^2 = S(phi) - 2 Re[e^(j phi L) Rbar(phi)]
// with S real and smooth and Rbar smooth; the e^(j phi L) factor carries all
// the fast f-dependence, which keeps quadratures oscillation-free.
class ExpKernel {
 public:
  ExpKernel() = default;
  ExpKernel(std::vector<ExpTerm> terms, double span_km);

  cplx mu(double phi) const;
  double S(double phi) const;
  cplx Rbar(double phi) const;
  double mu_sq(double phi) const;
  double mu_dc() const { return mu_dc_; }
  double span() const { return L_; }
  double min_rate() const { return s_min_abs_; }
  const std::vector<ExpTerm>& terms() const { return terms_; }

 private:
  std::vector<ExpTerm> terms_;
  double L_ = 0.0;
  double mu_dc_ = 0.0;
  double s_min_abs_ = 1.0;
  std::vector<double> emL_;  // e^(-s_m L)
};

// (1 - e^(-w)) / w with the small-|w| series.
cplx one_minus_exp_over(cplx w);
// expm1(-a L)/a (-> -L as a -> 0).
double expm1_over(double a, double L);

// Integral of g(x) e^(j theta(x)) dx with g and theta piecewise linear
// between the supplied nodes (theta exact at nodes).
cplx filon_linear(const std::vector<double>& x, const std::vector<cplx>& g,
                  const std::vector<double>& theta);

// Node set on [a, b] geometrically refined around `focus` down to `scale`,
// with a cap on the coarsest spacing.
std::vector<double> graded_nodes(double a, double b, double focus, double scale,
                                 int max_nodes = 512);

// Phased-array factor sin^2(n x / 2) / sin^2(x / 2).
double chi_factor(double x, int n);

// Dispersion context: beta at the reference frequency; phases consume
// frequency offsets from it (the documented normalization layer).
struct DispersionCtx {
  double beta2 = 0.0;  // ps^2/km
  double beta3 = 0.0;  // ps^3/km
  double f_ref_thz = 0.0;
};

// -4 pi^2 [beta2 + pi beta3 ((f_i - f_ref) + (f_k - f_ref))]
double dispersion_slope_b(const DispersionCtx& d, double f_i, double f_k);
// phi_{i,k} = (f_k - f_i) * dispersion_slope_b
double phi_ik(const DispersionCtx& d, double f_i, double f_k);
// Exact four-wave phase: -4 pi^2 (f1-f3)(f2-f3)[beta2 + pi beta3 (f1~+f2~)]
double phi_exact(const DispersionCtx& d, double f1, double f2, double f3);

// (2|df| - B) ln((2|df| - B)/(2|df| + B)) + 2B, with the removable
// 2|df| -> B limit evaluated as 2B. Throws if 2|df| < B (overlap).
double coherence_bracket(double delta_f, double B);

// Channel-k 3-exponential power-profile kernel from the derived terms.
ExpKernel kernel_from_terms(const ChannelTerms& t, double span_km);

int n_tilde(int n_spans);  // 0 for a single span, n otherwise

}  // namespace rgn
