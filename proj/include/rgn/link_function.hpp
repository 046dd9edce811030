#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "rgn/channel_plan.hpp"
#include "rgn/derived_terms.hpp"
#include "rgn/nli_common.hpp"
#include "rgn/power_profile.hpp"

namespace rgn {

// Normalized power-profile surface rho(z, f) backing the link function:
// either the raw ODE solution or the fitted 3-exponential model.
class ProfileSourceBase {
 public:
  virtual ~ProfileSourceBase() = default;
  virtual double rho(double f_thz, double z_km) const = 0;
  virtual double span_km() const = 0;
  virtual const std::vector<double>& z_grid() const = 0;
  // Exponential representation at (near) a channel center, when available.
  virtual const ExpKernel* channel_kernel(size_t) const { return nullptr; }
};

class RawProfileSource final : public ProfileSourceBase {
 public:
  explicit RawProfileSource(const PowerProfile& profile) : profile_(&profile) {}
  double rho(double f_thz, double z_km) const override { return profile_->rho_at(f_thz, z_km); }
  double span_km() const override { return profile_->span_length_km(); }
  const std::vector<double>& z_grid() const override { return profile_->z_km; }

 private:
  const PowerProfile* profile_;
};

class FittedProfileSource final : public ProfileSourceBase {
 public:
  FittedProfileSource(const DerivedTerms& terms, const ChannelPlan& plan);
  double rho(double f_thz, double z_km) const override;
  double span_km() const override { return span_; }
  const std::vector<double>& z_grid() const override { return z_; }
  const ExpKernel* channel_kernel(size_t channel_index) const override {
    return &kernels_[channel_index];
  }

 private:
  const DerivedTerms* terms_;
  const ChannelPlan* plan_;
  double span_;
  std::vector<double> z_;
  std::vector<ExpKernel> kernels_;
};

struct LinkFunctionSpec {
  const ProfileSourceBase* source = nullptr;  // exactly one profile source
  DispersionCtx disp;
  double span_km = 0.0;
  // Transparent-link normalization: divide the leg product by rho(z, f3)
  // before the square root. The NLI integrals use true; the plain operation
  // defaults to the printed form (false).
  bool normalized = false;
};

// mu(f1, f2, f3) = int_0^L sqrt(rho(z,f1) rho(z,f2) rho(z,f1+f2-f3) [/rho(z,f3)])
//                  e^{j phi(f1,f2,f3) z} dz  [km]
// Piecewise-exponential kernel representation on the source z grid; the
// oscillatory factor is integrated exactly per segment.
std::complex<double> link_function(double f1, double f2, double f3,
                                   const LinkFunctionSpec& spec);

}  // namespace rgn
