#include "rgn/link_function.hpp"

#include <cmath>
#include <stdexcept>

namespace rgn {

FittedProfileSource::FittedProfileSource(const DerivedTerms& terms, const ChannelPlan& plan)
    : terms_(&terms), plan_(&plan), span_(terms.span_km) {
  const int n = 257;
  z_.resize(n);
  for (int i = 0; i < n; ++i) z_[static_cast<size_t>(i)] = span_ * i / (n - 1);
  for (const auto& t : terms.per_channel) kernels_.push_back(kernel_from_terms(t, span_));
}

double FittedProfileSource::rho(double f_thz, double z_km) const {
  const auto& ch = plan_->channels;
  // clamp outside the grid, linear interpolation across channel centers inside
  if (f_thz <= ch.front().center_frequency_thz) return terms_rho(terms_->per_channel.front(), z_km);
  if (f_thz >= ch.back().center_frequency_thz) return terms_rho(terms_->per_channel.back(), z_km);
  size_t a = 0, b = ch.size() - 1;
  while (b - a > 1) {
    size_t m = (a + b) / 2;
    (ch[m].center_frequency_thz <= f_thz ? a : b) = m;
  }
  const double f0 = ch[a].center_frequency_thz, f1 = ch[b].center_frequency_thz;
  const double t = (f_thz - f0) / (f1 - f0);
  const double r0 = terms_rho(terms_->per_channel[a], z_km);
  const double r1 = terms_rho(terms_->per_channel[b], z_km);
  return r0 + t * (r1 - r0);
}

std::complex<double> link_function(double f1, double f2, double f3,
                                   const LinkFunctionSpec& spec) {
  if (spec.source == nullptr) throw std::invalid_argument("link_function: no profile source");
  const double f4 = f1 + f2 - f3;
  const double phi = phi_exact(spec.disp, f1, f2, f3);
  const auto& z = spec.source->z_grid();

  std::vector<double> K(z.size());
  for (size_t i = 0; i < z.size(); ++i) {
    double prod = spec.source->rho(f1, z[i]) * spec.source->rho(f2, z[i]) *
                  spec.source->rho(f4, z[i]);
    if (spec.normalized) prod /= spec.source->rho(f3, z[i]);
    if (!(prod > 0.0)) throw std::runtime_error("link_function: non-positive profile product");
    K[i] = std::sqrt(prod);
  }

  // per-segment exponential kernel, exact phase factor
  cplx acc = 0.0;
  for (size_t i = 0; i + 1 < z.size(); ++i) {
    const double h = z[i + 1] - z[i];
    const double s = std::log(K[i] / K[i + 1]) / h;  // K ~ K_i e^{-s (z - z_i)}
    const cplx w = cplx(s, -phi) * h;
    acc += K[i] * std::exp(cplx(0.0, phi * z[i])) * h * one_minus_exp_over(w);
  }
  return acc;
}

}  // namespace rgn
