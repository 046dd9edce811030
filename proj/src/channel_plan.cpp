#include "rgn/channel_plan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rgn/units.hpp"

namespace rgn {

double ChannelPlan::total_launch_power_mw() const {
  double s = 0.0;
  for (const auto& c : channels) s += c.launch_power_mw;
  return s;
}

double ChannelPlan::power_weighted_mean_frequency_thz() const {
  double num = 0.0, den = 0.0;
  for (const auto& c : channels) {
    num += c.launch_power_mw * c.center_frequency_thz;
    den += c.launch_power_mw;
  }
  if (den <= 0.0) throw std::logic_error("plan has no launch power");
  return num / den;
}

double ChannelPlan::occupied_bandwidth_thz() const {
  if (channels.empty()) return 0.0;
  return channels.back().center_frequency_thz + 0.5 * channels.back().bandwidth_thz -
         (channels.front().center_frequency_thz - 0.5 * channels.front().bandwidth_thz);
}

void ChannelPlan::validate() const {
  if (channels.empty()) throw std::invalid_argument("channel plan is empty");
  for (const auto& c : channels) {
    if (c.launch_power_mw <= 0.0) throw std::invalid_argument("channel power must be > 0");
    if (c.bandwidth_thz <= 0.0) throw std::invalid_argument("channel bandwidth must be > 0");
    if (c.center_frequency_thz <= 0.0) throw std::invalid_argument("channel frequency must be > 0");
  }
  for (size_t i = 1; i < channels.size(); ++i) {
    const auto& a = channels[i - 1];
    const auto& b = channels[i];
    if (!(b.center_frequency_thz > a.center_frequency_thz))
      throw std::invalid_argument("channels must be sorted by frequency");
    const double df = b.center_frequency_thz - a.center_frequency_thz;
    if (!(2.0 * df > a.bandwidth_thz) || !(2.0 * df > b.bandwidth_thz))
      throw std::invalid_argument("overlapping channels in plan");
  }
}

ChannelPlan build_channel_plan(double center_wavelength_nm, int n_channels,
                               double symbol_rate_gbd, double spacing_ghz,
                               const std::vector<BandGap>& gaps,
                               double per_channel_power_dbm,
                               const std::string& constellation_tag) {
  if (n_channels < 1) throw std::invalid_argument("build_channel_plan: n_channels >= 1 required");
  if (spacing_ghz < symbol_rate_gbd)
    throw std::invalid_argument("build_channel_plan: spacing below symbol rate (overlapping grid)");

  const double f_center = thz_from_nm(center_wavelength_nm);
  const double spacing = spacing_ghz * 1e-3;  // THz
  const double bw = symbol_rate_gbd * 1e-3;
  const double power_mw = mw_from_dbm(per_channel_power_dbm);
  const double phi = excess_kurtosis(make_constellation(constellation_tag));

  ChannelPlan plan;
  plan.constellation_tag = constellation_tag;
  plan.channels.resize(static_cast<size_t>(n_channels));
  for (int i = 0; i < n_channels; ++i) {
    double f = f_center + (i - 0.5 * (n_channels - 1)) * spacing;
    plan.channels[static_cast<size_t>(i)] =
        Channel{f, bw, power_mw, phi};
  }
  // Each gap shifts every channel above its boundary frequency upward by the
  // gap's width converted at the boundary wavelength. Shifts are accumulated
  // against the original uniform grid, so the result is independent of
  // gap-list order.
  std::vector<double> shift(plan.channels.size(), 0.0);
  for (const auto& g : gaps) {
    const double f_boundary = thz_from_nm(g.boundary_wavelength_nm);
    const double df_gap =
        kSpeedOfLightNmTHz * g.gap_nm / (g.boundary_wavelength_nm * g.boundary_wavelength_nm);
    for (size_t i = 0; i < plan.channels.size(); ++i)
      if (plan.channels[i].center_frequency_thz > f_boundary) shift[i] += df_gap;
  }
  for (size_t i = 0; i < plan.channels.size(); ++i)
    plan.channels[i].center_frequency_thz += shift[i];
  for (const auto& c : plan.channels)
    if (c.center_frequency_thz - 0.5 * c.bandwidth_thz <= 0.0)
      throw std::invalid_argument("build_channel_plan: gap list produced non-positive frequency");

  std::sort(plan.channels.begin(), plan.channels.end(),
            [](const Channel& a, const Channel& b) {
              return a.center_frequency_thz < b.center_frequency_thz;
            });
  plan.validate();
  return plan;
}

}  // namespace rgn
