#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rgn/link_config.hpp"
#include "rgn/pump_optimizer.hpp"
#include "rgn/raman_solver.hpp"
#include "rgn/ssfm.hpp"

namespace rgn {

// Flat dotted-key configuration text: `key = value`, '#' comments, repeatable
// keys for pumps/gaps/candidates. Strict mode rejects unknown or duplicated
// scalar keys with line diagnostics.
struct GridParams {
  double center_wavelength_nm = 1550.0;
  int channels = 1;
  double symbol_rate_gbd = 10.0;
  double spacing_ghz = 50.0;
  std::vector<BandGap> gaps;
  double power_dbm = 0.0;
  std::string constellation = "gaussian";
};

struct RunConfig {
  FiberSpec fiber;
  std::string attenuation_csv;
  std::string raman_gain_csv;
  GridParams grid;
  ChannelPlan plan;  // built from grid at parse time
  PumpSet pumps;
  int n_spans = 1;
  std::optional<double> snr_ase_db;
  std::optional<double> snr_trx_db;
  RamanSolverOptions solver;
  std::string nli_backend = "closed";
  bool nli_exact_fwm = false;
  bool nli_raw_profile = false;
  bool nli_scalar_polarization = false;
  SsfmConfig ssfm;
  bool has_pump_problem = false;
  PumpProblem pump_problem;
  std::string config_sha256;  // hash of the file bytes
};

RunConfig parse_config(const std::string& path, bool strict = true);

// Canonical text form; parse(serialize(parse(x))) == parse(x).
std::string serialize_config(const RunConfig& cfg);

}  // namespace rgn
