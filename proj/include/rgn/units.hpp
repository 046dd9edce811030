#pragma once

#include <cmath>

// Internal unit system: THz, ps, km, mW. With these choices THz*ps = 1,
// beta2 [ps^2/km] * THz^2 * km = rad, and attenuation/gain rates are 1/km.
// dB/dBm appear only at I/O boundaries (cli_io, CSV headers).

namespace rgn {

inline constexpr double kSpeedOfLightNmTHz = 299792.458;  // c in nm*THz (= nm/ps)
inline constexpr double kPi = 3.14159265358979323846;

inline double thz_from_nm(double wavelength_nm) { return kSpeedOfLightNmTHz / wavelength_nm; }
inline double nm_from_thz(double frequency_thz) { return kSpeedOfLightNmTHz / frequency_thz; }

inline double db_from_linear(double x) { return 10.0 * std::log10(x); }
inline double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }

inline double mw_from_dbm(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double dbm_from_mw(double mw) { return 10.0 * std::log10(mw); }

// Power attenuation: dB/km -> 1/km (Np/km on power).
inline double per_km_from_db_per_km(double db_per_km) {
  return db_per_km * std::log(10.0) / 10.0;
}
inline double db_per_km_from_per_km(double per_km) {
  return per_km * 10.0 / std::log(10.0);
}

struct Beta {
  double beta2_ps2_km = 0.0;
  double beta3_ps3_km = 0.0;
};

// D [ps/(nm km)], S [ps/(nm^2 km)] at the reference wavelength -> beta2/beta3
// Taylor coefficients at that wavelength.
inline Beta dispersion_to_beta(double D, double S, double reference_wavelength_nm) {
  const double lam = reference_wavelength_nm;
  const double k = lam * lam / (2.0 * kPi * kSpeedOfLightNmTHz);  // ps*nm
  Beta b;
  b.beta2_ps2_km = -D * k;
  b.beta3_ps3_km = k * k * (S + 2.0 * D / lam);
  return b;
}

inline void beta_to_dispersion(const Beta& b, double reference_wavelength_nm, double& D, double& S) {
  const double lam = reference_wavelength_nm;
  const double k = lam * lam / (2.0 * kPi * kSpeedOfLightNmTHz);
  D = -b.beta2_ps2_km / k;
  S = b.beta3_ps3_km / (k * k) - 2.0 * D / lam;
}

}  // namespace rgn
