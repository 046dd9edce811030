#pragma once

#include <string>

#include "rgn/tabulated.hpp"
#include "rgn/units.hpp"

namespace rgn {

// One fiber type: spectra plus scalar dispersion/nonlinearity parameters.
// Attenuation is tabulated vs wavelength [nm] in dB/km; Raman gain vs pump-
// signal frequency separation [THz] in 1/(W km), normalized at
// raman_reference_thz (gain between two actual components scales linearly
// with donor frequency / reference frequency).
struct FiberSpec {
  TabulatedCurve attenuation_db_per_km;   // x: wavelength nm
  TabulatedCurve raman_gain_per_w_km;     // x: delta f THz
  double raman_reference_thz = 206.0;
  double gamma_per_w_km = 1.2;
  double dispersion_D = 16.5;             // ps/(nm km) at reference wavelength
  double dispersion_slope_S = 0.09;       // ps/(nm^2 km)
  double reference_wavelength_nm = 1550.0;
  double span_length_km = 100.0;

  // Power attenuation rate [1/km] at an absolute frequency.
  double alpha_per_km(double frequency_thz) const {
    return per_km_from_db_per_km(attenuation_db_per_km(nm_from_thz(frequency_thz)));
  }
  // Pair gain rate [1/(W km)] for donor (higher f) -> acceptor transfer.
  double raman_gain(double donor_thz, double acceptor_thz) const {
    const double df = donor_thz - acceptor_thz;
    if (df <= 0.0) return 0.0;
    return raman_gain_per_w_km(df) * donor_thz / raman_reference_thz;
  }
  double gamma_per_mw_km() const { return gamma_per_w_km * 1e-3; }
  Beta beta() const { return dispersion_to_beta(dispersion_D, dispersion_slope_S, reference_wavelength_nm); }
  double reference_frequency_thz() const { return thz_from_nm(reference_wavelength_nm); }

  void validate() const;  // positivity, single Raman maximum in (10,16) THz
};

// Synthetic flat-loss fiber with a triangular Raman peak; test/utility helper.
FiberSpec make_flat_fiber(double attenuation_db_per_km, double span_km,
                          double raman_peak_per_w_km = 0.42,
                          double raman_peak_thz = 13.0);

}  // namespace rgn
