#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rgn/gn_context.hpp"

namespace rgn {

// Closed-form modulation-format correction coefficient [1/mW^2]: the full
// (l1,l2) x (l1',l2') term set (atan block, sign/exponential block, coherence
// block) over all interfering channels. Near-degenerate pairs (zero net
// dispersion, cancelling rates) are evaluated by the exact finite-band pair
// integral and flagged.
struct ClosedFormDiag {
  int guarded_pairs = 0;  // pairs evaluated by the exact fallback
};

double eta_corr_closed(const GnContext& ctx, size_t coi, int n_spans,
                       ClosedFormDiag* diag = nullptr);

// Gaussian-modulation closed-form NLI coefficient on the same DerivedTerms:
// XPM by per-interferer pair-term algebra with exact triangular support,
// SPM by the exact reduction of the hexagonal support to one dimension,
// multi-span by incoherent scaling plus the SPM phased-array excess.
double eta_gn_closed(const GnContext& ctx, size_t coi, int n_spans,
                     ClosedFormDiag* diag = nullptr);

struct NliChannelResult {
  double wavelength_nm = 0.0;
  double eta_gn = 0.0;    // 1/mW^2
  double eta_corr = 0.0;  // 1/mW^2
  double eta_total = 0.0;
  double snr_nli_db = 0.0;
  bool guard_flagged = false;
};

struct NliResult {
  std::vector<NliChannelResult> per_channel;
  std::string backend;  // "closed" | "integral"
  int n_spans = 1;
};

enum class NliBackend { Closed, Integral };

NliResult evaluate_nli(const GnContext& ctx, NliBackend backend, int n_spans);

// SNR assembly: SNR_NLI = 1/(eta P^2); total by inverse sum over the terms
// supplied. Non-positive eta is surfaced through the flag, never masked.
struct SnrResult {
  double snr_nli_db = 0.0;
  double snr_total_db = 0.0;
  bool eta_nonpositive = false;
};

SnrResult snr_assemble(double eta_total_per_mw2, double launch_power_mw,
                       std::optional<double> snr_ase_db = std::nullopt,
                       std::optional<double> snr_trx_db = std::nullopt);

}  // namespace rgn
