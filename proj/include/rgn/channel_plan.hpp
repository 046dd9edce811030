#pragma once

#include <string>
#include <vector>

#include "rgn/constellation.hpp"

namespace rgn {

struct Channel {
  double center_frequency_thz = 0.0;
  double bandwidth_thz = 0.0;     // symbol rate (Nyquist occupancy)
  double launch_power_mw = 0.0;
  double excess_kurtosis = 0.0;   // Phi of the constellation
};

// WDM grid, sorted by frequency, pairwise non-overlapping.
struct ChannelPlan {
  std::vector<Channel> channels;
  std::string constellation_tag;

  size_t size() const { return channels.size(); }
  const Channel& at(size_t i) const { return channels[i]; }
  double total_launch_power_mw() const;
  double power_weighted_mean_frequency_thz() const;
  // f_last + B/2 - (f_first - B/2)
  double occupied_bandwidth_thz() const;
  void validate() const;  // throws on unsorted/overlap/non-positive fields
};

struct BandGap {
  double boundary_wavelength_nm = 0.0;  // channels at shorter wavelengths shift away
  double gap_nm = 0.0;
};

// Uniform grid of n channels spaced `spacing_ghz`, centred (as a comb) at
// `center_wavelength_nm`, with extra frequency gaps opened at band boundaries.
// Gap application is order-independent. Throws if spacing < symbol rate or a
// gap pushes any channel to non-positive frequency.
ChannelPlan build_channel_plan(double center_wavelength_nm, int n_channels,
                               double symbol_rate_gbd, double spacing_ghz,
                               const std::vector<BandGap>& gaps,
                               double per_channel_power_dbm,
                               const std::string& constellation_tag);

}  // namespace rgn
