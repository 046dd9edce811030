#include "rgn/fiber.hpp"

#include <stdexcept>

namespace rgn {

void FiberSpec::validate() const {
  for (double a : attenuation_db_per_km.ys())
    if (!(a > 0.0)) throw std::invalid_argument("attenuation values must be strictly positive");
  const auto& gx = raman_gain_per_w_km.xs();
  const auto& gy = raman_gain_per_w_km.ys();
  size_t argmax = 0;
  for (size_t i = 0; i < gy.size(); ++i) {
    if (gy[i] < 0.0) throw std::invalid_argument("raman gain must be non-negative");
    if (gy[i] > gy[argmax]) argmax = i;
  }
  if (!(gx[argmax] > 10.0 && gx[argmax] < 16.0))
    throw std::invalid_argument("raman gain peak must lie in (10, 16) THz separation");
  if (!(span_length_km > 0.0)) throw std::invalid_argument("span length must be > 0");
  if (!(gamma_per_w_km >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  if (!(raman_reference_thz > 0.0)) throw std::invalid_argument("raman reference frequency must be > 0");
  if (!(reference_wavelength_nm > 0.0)) throw std::invalid_argument("reference wavelength must be > 0");
}

FiberSpec make_flat_fiber(double attenuation_db_per_km, double span_km,
                          double raman_peak_per_w_km, double raman_peak_thz) {
  FiberSpec f;
  f.attenuation_db_per_km =
      TabulatedCurve({1000.0, 1800.0}, {attenuation_db_per_km, attenuation_db_per_km}, "attenuation");
  f.raman_gain_per_w_km = TabulatedCurve(
      {0.0, raman_peak_thz, raman_peak_thz + 2.0, 30.0},
      {0.0, raman_peak_per_w_km, 0.25 * raman_peak_per_w_km, 0.0}, "raman gain");
  f.span_length_km = span_km;
  return f;
}

}  // namespace rgn
