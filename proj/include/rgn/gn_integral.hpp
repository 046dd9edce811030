#pragma once

#include "rgn/gn_context.hpp"

namespace rgn {

// Integral-form modulation-format correction coefficient [1/mW^2]:
//   (80/81) sum_{k != i} Phi_k (gamma^2/B_k) (P_k/P_i)^2
//     { n * int_{-B_i/2}^{B_i/2} |mu(f1+f_i, f_k, f_i)|^2 df1
//       + |mu(f_i, f_k, f_i)|^2 (2 pi n~ / (|phi~_k| B_k^2)) *
//         [(2|df| - B_k) ln((2|df| - B_k)/(2|df| + B_k)) + 2 B_k] }
// with n~ = 0 for a single span and n otherwise.
double eta_corr_integral(const GnContext& ctx, size_t coi, int n_spans);

// Gaussian-modulation NLI coefficient by adaptive quadrature over the
// SPM + XPM interaction islands (exact triangular third-leg support), or the
// full FWM channel-triple set when ctx.exact_fwm is set. Multi-span
// accumulation through the exact per-span phased-array factor.
double eta_gn_integral(const GnContext& ctx, size_t coi, int n_spans);

}  // namespace rgn
