#pragma once

#include <cmath>
#include <string>

#include "rgn/channel_plan.hpp"
#include "rgn/fiber.hpp"
#include "rgn/units.hpp"

#ifndef RGN_DATA_DIR
#define RGN_DATA_DIR "data"
#endif

namespace rgn_test {

inline std::string data_dir() { return RGN_DATA_DIR; }

// plan of n equal channels around a center wavelength, no gaps
inline rgn::ChannelPlan small_plan(int n, double rate_gbd = 10.0, double spacing_ghz = 50.0,
                                   double power_dbm = 0.0,
                                   const std::string& cons = "gaussian",
                                   double center_nm = 1550.0) {
  return rgn::build_channel_plan(center_nm, n, rate_gbd, spacing_ghz, {}, power_dbm, cons);
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline double db_ratio(double a, double b) { return 10.0 * std::log10(a / b); }

}  // namespace rgn_test
