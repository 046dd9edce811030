#pragma once

#include <string>
#include <vector>

namespace rgn {

// Sampled power evolution of every frequency component over one span.
// Component order: all plan channels (by index), then pumps (by index).
struct ProfileComponent {
  double frequency_thz = 0.0;
  bool is_pump = false;
  int index = 0;  // channel index or pump index within its group
};

struct PowerProfile {
  std::vector<double> z_km;                       // strictly increasing, [0, L]
  std::vector<ProfileComponent> components;
  std::vector<std::vector<double>> power_mw;      // [component][z]
  std::vector<std::vector<double>> normalized;    // rho = P(z,f)/P(0,f), signals only meaningful

  size_t n_components() const { return components.size(); }
  double span_length_km() const { return z_km.back(); }

  // Index of the component at this exact frequency; throws if absent.
  size_t component_at(double frequency_thz) const;

  // Monotone (Fritsch-Carlson) interpolation in z of (power, rho).
  // Throws if the frequency was not solved or z outside [0, L].
  void sample(double frequency_thz, double z, double& power_mw_out, double& rho_out) const;

  // rho(z, f) with linear interpolation across component frequencies,
  // monotone interpolation in z. Used by the raw-profile NLI backend.
  double rho_at(double frequency_thz, double z) const;

  void validate() const;
};

}  // namespace rgn
