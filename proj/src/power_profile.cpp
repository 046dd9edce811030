#include "rgn/power_profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rgn {

namespace {

// Fritsch-Carlson monotone cubic interpolation on one sorted table.
double monotone_interp(const std::vector<double>& x, const std::vector<double>& y, double xq) {
  const size_t n = x.size();
  if (xq <= x.front()) return y.front();
  if (xq >= x.back()) return y.back();
  size_t a = 0, b = n - 1;
  while (b - a > 1) {
    size_t m = (a + b) / 2;
    (x[m] <= xq ? a : b) = m;
  }
  const size_t i = a;
  const double h = x[i + 1] - x[i];
  const double d = (y[i + 1] - y[i]) / h;
  auto slope = [&](size_t k) -> double {
    if (k == 0) return (y[1] - y[0]) / (x[1] - x[0]);
    if (k == n - 1) return (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    const double d0 = (y[k] - y[k - 1]) / (x[k] - x[k - 1]);
    const double d1 = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
    if (d0 * d1 <= 0.0) return 0.0;
    // harmonic mean keeps the interpolant monotone
    return 2.0 * d0 * d1 / (d0 + d1);
  };
  double m0 = slope(i), m1 = slope(i + 1);
  if (d == 0.0) {
    m0 = m1 = 0.0;
  } else {
    const double a0 = m0 / d, a1 = m1 / d;
    const double s = a0 * a0 + a1 * a1;
    if (s > 9.0) {
      const double t = 3.0 / std::sqrt(s);
      m0 = t * a0 * d;
      m1 = t * a1 * d;
    }
  }
  const double t = (xq - x[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + t) * h * m0 +
         (-2 * t3 + 3 * t2) * y[i + 1] + (t3 - t2) * h * m1;
}

}  // namespace

size_t PowerProfile::component_at(double frequency_thz) const {
  for (size_t i = 0; i < components.size(); ++i)
    if (std::abs(components[i].frequency_thz - frequency_thz) < 1e-9) return i;
  throw std::invalid_argument("PowerProfile: frequency not among solved components");
}

void PowerProfile::sample(double frequency_thz, double z, double& power_out, double& rho_out) const {
  if (z < z_km.front() - 1e-12 || z > z_km.back() + 1e-12)
    throw std::invalid_argument("PowerProfile::sample: z outside [0, L]");
  z = std::clamp(z, z_km.front(), z_km.back());
  const size_t c = component_at(frequency_thz);
  power_out = monotone_interp(z_km, power_mw[c], z);
  rho_out = monotone_interp(z_km, normalized[c], z);
}

double PowerProfile::rho_at(double frequency_thz, double z) const {
  z = std::clamp(z, z_km.front(), z_km.back());
  // signals only; pumps are not part of the NLI profile surface
  size_t lo = static_cast<size_t>(-1), hi = static_cast<size_t>(-1);
  for (size_t i = 0; i < components.size(); ++i) {
    if (components[i].is_pump) continue;
    const double f = components[i].frequency_thz;
    if (f <= frequency_thz && (lo == static_cast<size_t>(-1) || f > components[lo].frequency_thz)) lo = i;
    if (f >= frequency_thz && (hi == static_cast<size_t>(-1) || f < components[hi].frequency_thz)) hi = i;
  }
  if (lo == static_cast<size_t>(-1) && hi == static_cast<size_t>(-1))
    throw std::logic_error("PowerProfile::rho_at: no signal components");
  if (lo == static_cast<size_t>(-1)) lo = hi;
  if (hi == static_cast<size_t>(-1)) hi = lo;
  const double r_lo = monotone_interp(z_km, normalized[lo], z);
  if (lo == hi) return r_lo;
  const double r_hi = monotone_interp(z_km, normalized[hi], z);
  const double f0 = components[lo].frequency_thz, f1 = components[hi].frequency_thz;
  const double t = (frequency_thz - f0) / (f1 - f0);
  return r_lo + t * (r_hi - r_lo);
}

void PowerProfile::validate() const {
  if (z_km.size() < 2 || z_km.front() != 0.0)
    throw std::logic_error("PowerProfile: bad z grid");
  for (size_t i = 1; i < z_km.size(); ++i)
    if (!(z_km[i] > z_km[i - 1])) throw std::logic_error("PowerProfile: z grid not increasing");
  for (size_t c = 0; c < components.size(); ++c) {
    for (double p : power_mw[c])
      if (!(p >= 0.0) || !std::isfinite(p))
        throw std::logic_error("PowerProfile: non-finite or negative power");
    if (!components[c].is_pump && std::abs(normalized[c].front() - 1.0) > 1e-12)
      throw std::logic_error("PowerProfile: rho(0) != 1 for a signal");
  }
}

}  // namespace rgn
