#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "rgn/channel_plan.hpp"
#include "rgn/fiber.hpp"
#include "rgn/pumps.hpp"

namespace rgn {

enum class AmplificationPolicy { LumpedIdeal, RamanRecovered };

// Identical spans: one FiberSpec and one PumpSet apply to every span.
struct LinkConfig {
  FiberSpec fiber;
  ChannelPlan plan;
  PumpSet pumps;
  int n_spans = 1;
  AmplificationPolicy policy = AmplificationPolicy::LumpedIdeal;
  std::optional<double> snr_ase_db;  // per-channel user constants (uniform)
  std::optional<double> snr_trx_db;

  void validate() const {
    if (n_spans < 1) throw std::invalid_argument("n_spans must be >= 1");
    fiber.validate();
    plan.validate();
    pumps.validate();
  }
};

}  // namespace rgn
