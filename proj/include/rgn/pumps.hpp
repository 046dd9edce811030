#pragma once

#include <stdexcept>
#include <vector>

#include "rgn/units.hpp"

namespace rgn {

enum class PumpDirection { Forward, Backward };

struct Pump {
  double wavelength_nm = 0.0;
  double injection_power_mw = 0.0;  // at z = 0 (forward) or z = L (backward)
  PumpDirection direction = PumpDirection::Backward;

  double frequency_thz() const { return thz_from_nm(wavelength_nm); }
};

struct PumpSet {
  std::vector<Pump> pumps;

  bool empty() const { return pumps.empty(); }
  size_t size() const { return pumps.size(); }

  double total_power_mw(PumpDirection dir) const {
    double p = 0.0;
    for (const auto& q : pumps)
      if (q.direction == dir) p += q.injection_power_mw;
    return p;
  }

  // Mean of pump frequencies (unweighted), per the plan-level definition.
  double average_pump_frequency_thz() const {
    if (pumps.empty()) throw std::logic_error("average_pump_frequency: no pumps");
    double s = 0.0;
    for (const auto& q : pumps) s += q.frequency_thz();
    return s / static_cast<double>(pumps.size());
  }

  // Power-weighted mean frequency of one side; 0 if that side carries no power.
  double side_mean_frequency_thz(PumpDirection dir) const {
    double num = 0.0, den = 0.0;
    for (const auto& q : pumps)
      if (q.direction == dir) {
        num += q.injection_power_mw * q.frequency_thz();
        den += q.injection_power_mw;
      }
    return den > 0.0 ? num / den : 0.0;
  }

  void validate() const {
    for (const auto& q : pumps) {
      if (q.wavelength_nm <= 0.0) throw std::invalid_argument("pump wavelength must be positive");
      if (q.injection_power_mw < 0.0) throw std::invalid_argument("pump power must be >= 0");
    }
  }
};

}  // namespace rgn
