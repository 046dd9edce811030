#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rgn/channel_plan.hpp"
#include "rgn/fiber.hpp"
#include "rgn/power_profile.hpp"

namespace rgn {

// Desk-scale split-step Fourier validator. Single-polarization scalar NLSE;
// loss and Raman gain enter through the frequency-resolved z-dependent power
// profile, enforced per channel band at every step. Per-span ideal lumped
// gain plus gain flattening restores the launch spectrum.
struct SsfmConfig {
  int symbols_per_channel = 4096;     // 2^12 .. 2^16
  int samples_per_symbol = 0;         // 0 = auto from occupied bandwidth
  double max_nonlinear_phase_rad = 1e-3;  // per step, on the mean total power
  double max_step_km = 1.0;
  uint64_t seed = 42;
  double oversampling_guard = 1.25;   // sim band >= occupied * guard
};

struct SsfmResult {
  // [channel][symbol] transmitted and received symbols (unit average power
  // per channel after normalization)
  std::vector<std::vector<std::complex<double>>> tx;
  std::vector<std::vector<std::complex<double>>> rx;
  uint64_t seed = 0;
  std::string config_digest;
  int n_steps_per_span = 0;
};

SsfmResult simulate_link(const SsfmConfig& cfg, const FiberSpec& fiber, const ChannelPlan& plan,
                         const PowerProfile& profile, int n_spans);

// Matched filtering and ideal CD compensation happen inside simulate_link's
// receiver; this removes the per-channel complex scalar and evaluates
// SNR = E|x|^2 / E|y - x|^2, capped at ceiling_db.
double measure_snr_nli_db(const std::vector<std::complex<double>>& tx,
                          const std::vector<std::complex<double>>& rx,
                          double ceiling_db = 100.0);

}  // namespace rgn
