#include "rgn/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rgn/csv.hpp"
#include "rgn/sha256.hpp"
#include "rgn/units.hpp"

namespace rgn {

namespace {

struct Entry {
  std::string value;
  size_t line;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::string dirname(const std::string& path) {
  const size_t p = path.find_last_of('/');
  return p == std::string::npos ? std::string(".") : path.substr(0, p);
}

const std::set<std::string> kScalarKeys = {
    "fiber.attenuation_csv", "fiber.raman_gain_csv", "fiber.raman_reference_thz",
    "fiber.gamma_per_w_km", "fiber.dispersion_ps_nm_km", "fiber.dispersion_slope_ps_nm2_km",
    "fiber.reference_wavelength_nm", "fiber.span_km",
    "grid.center_wavelength_nm", "grid.channels", "grid.symbol_rate_gbd", "grid.spacing_ghz",
    "grid.power_dbm", "grid.constellation",
    "link.spans", "link.snr_ase_db", "link.snr_trx_db",
    "solver.z_samples", "solver.rel_tol", "solver.bin_width_ghz",
    "nli.backend", "nli.exact_fwm", "nli.raw_profile", "nli.scalar_polarization",
    "ssfm.symbols", "ssfm.samples_per_symbol", "ssfm.seed", "ssfm.max_phase_mrad",
    "opt.band_lo_nm", "opt.band_hi_nm", "opt.tolerance_db", "opt.band_average", "opt.seed",
    "opt.population", "opt.generations"};
const std::set<std::string> kListKeys = {"grid.gap", "pump", "opt.candidate"};

class KeyBag {
 public:
  std::map<std::string, Entry> scalars;
  std::map<std::string, std::vector<Entry>> lists;
  std::set<std::string> consumed;

  std::optional<std::string> get(const std::string& k) {
    consumed.insert(k);
    auto it = scalars.find(k);
    if (it == scalars.end()) return std::nullopt;
    return it->second.value;
  }
  double get_num(const std::string& k, double dflt) {
    auto v = get(k);
    if (!v) return dflt;
    try {
      return std::stod(*v);
    } catch (const std::exception&) {
      throw std::runtime_error("config key '" + k + "': bad number '" + *v + "'");
    }
  }
  bool get_bool(const std::string& k, bool dflt) {
    auto v = get(k);
    if (!v) return dflt;
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    throw std::runtime_error("config key '" + k + "': expected true/false");
  }
  const std::vector<Entry>& list(const std::string& k) {
    consumed.insert(k);
    static const std::vector<Entry> empty;
    auto it = lists.find(k);
    return it == lists.end() ? empty : it->second;
  }
};

std::vector<double> split_numbers(const std::string& s, size_t want_min, size_t want_max,
                                  const std::string& what) {
  std::stringstream ss(s);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) {
    if (out.size() == want_max && want_max > 0) break;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      return out;  // stop at non-numeric token; caller checks counts
    }
  }
  if (out.size() < want_min)
    throw std::runtime_error(what + ": expected at least " + std::to_string(want_min) +
                             " numeric fields in '" + s + "'");
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream whole;
  whole << in.rdbuf();
  const std::string text = whole.str();

  KeyBag bag;
  {
    std::stringstream ss(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (kListKeys.count(key)) {
        bag.lists[key].push_back({value, lineno});
      } else if (kScalarKeys.count(key)) {
        if (bag.scalars.count(key))
          throw std::runtime_error(path + ":" + std::to_string(lineno) + ": duplicate key '" +
                                   key + "'");
        bag.scalars[key] = {value, lineno};
      } else if (strict) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                                 "'");
      }
    }
  }

  RunConfig cfg;
  cfg.config_sha256 = sha256_hex(text);
  const std::string base = dirname(path);
  auto resolve = [&](const std::string& p) {
    return (p.empty() || p.front() == '/') ? p : base + "/" + p;
  };

  // fiber
  auto att = bag.get("fiber.attenuation_csv");
  auto ram = bag.get("fiber.raman_gain_csv");
  if (!att || !ram)
    throw std::runtime_error("config: fiber.attenuation_csv and fiber.raman_gain_csv are required");
  cfg.attenuation_csv = *att;
  cfg.raman_gain_csv = *ram;
  {
    const CsvTable t = read_csv(resolve(*att));
    std::vector<double> x, y;
    for (const auto& r : t.rows) {
      x.push_back(r[0]);
      y.push_back(r[1]);
    }
    cfg.fiber.attenuation_db_per_km = TabulatedCurve(x, y, "attenuation");
  }
  {
    const CsvTable t = read_csv(resolve(*ram));
    std::vector<double> x, y;
    for (const auto& r : t.rows) {
      x.push_back(r[0]);
      y.push_back(r[1]);
    }
    cfg.fiber.raman_gain_per_w_km = TabulatedCurve(x, y, "raman gain");
  }
  cfg.fiber.raman_reference_thz = bag.get_num("fiber.raman_reference_thz", 206.0);
  cfg.fiber.gamma_per_w_km = bag.get_num("fiber.gamma_per_w_km", 1.2);
  cfg.fiber.dispersion_D = bag.get_num("fiber.dispersion_ps_nm_km", 16.5);
  cfg.fiber.dispersion_slope_S = bag.get_num("fiber.dispersion_slope_ps_nm2_km", 0.09);
  cfg.fiber.reference_wavelength_nm = bag.get_num("fiber.reference_wavelength_nm", 1550.0);
  cfg.fiber.span_length_km = bag.get_num("fiber.span_km", 100.0);
  cfg.fiber.validate();

  // grid
  cfg.grid.center_wavelength_nm = bag.get_num("grid.center_wavelength_nm", 1550.0);
  cfg.grid.channels = static_cast<int>(bag.get_num("grid.channels", 1));
  cfg.grid.symbol_rate_gbd = bag.get_num("grid.symbol_rate_gbd", 10.0);
  cfg.grid.spacing_ghz = bag.get_num("grid.spacing_ghz", 50.0);
  cfg.grid.power_dbm = bag.get_num("grid.power_dbm", 0.0);
  cfg.grid.constellation = bag.get("grid.constellation").value_or("gaussian");
  for (const auto& e : bag.list("grid.gap")) {
    const auto v = split_numbers(e.value, 2, 2, "grid.gap");
    cfg.grid.gaps.push_back({v[0], v[1]});
  }
  cfg.plan = build_channel_plan(cfg.grid.center_wavelength_nm, cfg.grid.channels,
                                cfg.grid.symbol_rate_gbd, cfg.grid.spacing_ghz, cfg.grid.gaps,
                                cfg.grid.power_dbm, cfg.grid.constellation);

  // pumps: wavelength_nm power_mw direction
  for (const auto& e : bag.list("pump")) {
    std::stringstream ss(e.value);
    double wl = 0.0, p = 0.0;
    std::string dir;
    if (!(ss >> wl >> p >> dir))
      throw std::runtime_error(path + ":" + std::to_string(e.line) +
                               ": pump expects 'wavelength_nm power_mw forward|backward'");
    PumpDirection d;
    if (dir == "forward")
      d = PumpDirection::Forward;
    else if (dir == "backward")
      d = PumpDirection::Backward;
    else
      throw std::runtime_error(path + ":" + std::to_string(e.line) + ": bad pump direction '" +
                               dir + "'");
    cfg.pumps.pumps.push_back({wl, p, d});
  }
  cfg.pumps.validate();

  cfg.n_spans = static_cast<int>(bag.get_num("link.spans", 1));
  if (auto v = bag.get("link.snr_ase_db")) cfg.snr_ase_db = std::stod(*v);
  if (auto v = bag.get("link.snr_trx_db")) cfg.snr_trx_db = std::stod(*v);

  cfg.solver.z_samples = static_cast<int>(bag.get_num("solver.z_samples", 257));
  cfg.solver.rel_tol = bag.get_num("solver.rel_tol", 1e-8);
  cfg.solver.channel_bin_width_ghz = bag.get_num("solver.bin_width_ghz", 0.0);

  cfg.nli_backend = bag.get("nli.backend").value_or("closed");
  if (cfg.nli_backend != "closed" && cfg.nli_backend != "integral")
    throw std::runtime_error("config: nli.backend must be 'closed' or 'integral'");
  cfg.nli_exact_fwm = bag.get_bool("nli.exact_fwm", false);
  cfg.nli_raw_profile = bag.get_bool("nli.raw_profile", false);
  cfg.nli_scalar_polarization = bag.get_bool("nli.scalar_polarization", false);

  cfg.ssfm.symbols_per_channel = static_cast<int>(bag.get_num("ssfm.symbols", 4096));
  cfg.ssfm.samples_per_symbol = static_cast<int>(bag.get_num("ssfm.samples_per_symbol", 0));
  cfg.ssfm.seed = static_cast<uint64_t>(bag.get_num("ssfm.seed", 42));
  cfg.ssfm.max_nonlinear_phase_rad = bag.get_num("ssfm.max_phase_mrad", 1.0) * 1e-3;

  // pump optimization problem
  const auto& cands = bag.list("opt.candidate");
  if (!cands.empty()) {
    cfg.has_pump_problem = true;
    for (const auto& e : cands) {
      const auto v = split_numbers(e.value, 2, 2, "opt.candidate");
      cfg.pump_problem.candidate_wavelengths_nm.push_back(v[0]);
      cfg.pump_problem.power_cap_mw.push_back(v[1]);
    }
    const double lo_nm = bag.get_num("opt.band_lo_nm", 0.0);
    const double hi_nm = bag.get_num("opt.band_hi_nm", 0.0);
    if (lo_nm <= 0.0 || hi_nm <= 0.0 || hi_nm <= lo_nm)
      throw std::runtime_error("config: opt.band_lo_nm/opt.band_hi_nm required with opt.candidate");
    cfg.pump_problem.band_lo_thz = thz_from_nm(hi_nm);
    cfg.pump_problem.band_hi_thz = thz_from_nm(lo_nm);
    cfg.pump_problem.recovery_tolerance_db = bag.get_num("opt.tolerance_db", 0.1);
    cfg.pump_problem.band_average = bag.get_bool("opt.band_average", false);
    cfg.pump_problem.seed = static_cast<uint64_t>(bag.get_num("opt.seed", 1));
    cfg.pump_problem.population = static_cast<int>(bag.get_num("opt.population", 16));
    cfg.pump_problem.generations = static_cast<int>(bag.get_num("opt.generations", 40));
  } else {
    bag.get("opt.band_lo_nm");
    bag.get("opt.band_hi_nm");
    bag.get("opt.tolerance_db");
    bag.get("opt.band_average");
    bag.get("opt.seed");
    bag.get("opt.population");
    bag.get("opt.generations");
  }
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream o;
  o.precision(15);
  o << "fiber.attenuation_csv = " << cfg.attenuation_csv << "\n";
  o << "fiber.raman_gain_csv = " << cfg.raman_gain_csv << "\n";
  o << "fiber.raman_reference_thz = " << cfg.fiber.raman_reference_thz << "\n";
  o << "fiber.gamma_per_w_km = " << cfg.fiber.gamma_per_w_km << "\n";
  o << "fiber.dispersion_ps_nm_km = " << cfg.fiber.dispersion_D << "\n";
  o << "fiber.dispersion_slope_ps_nm2_km = " << cfg.fiber.dispersion_slope_S << "\n";
  o << "fiber.reference_wavelength_nm = " << cfg.fiber.reference_wavelength_nm << "\n";
  o << "fiber.span_km = " << cfg.fiber.span_length_km << "\n";
  o << "grid.center_wavelength_nm = " << cfg.grid.center_wavelength_nm << "\n";
  o << "grid.channels = " << cfg.grid.channels << "\n";
  o << "grid.symbol_rate_gbd = " << cfg.grid.symbol_rate_gbd << "\n";
  o << "grid.spacing_ghz = " << cfg.grid.spacing_ghz << "\n";
  for (const auto& g : cfg.grid.gaps)
    o << "grid.gap = " << g.boundary_wavelength_nm << " " << g.gap_nm << "\n";
  o << "grid.power_dbm = " << cfg.grid.power_dbm << "\n";
  o << "grid.constellation = " << cfg.grid.constellation << "\n";
  for (const auto& p : cfg.pumps.pumps)
    o << "pump = " << p.wavelength_nm << " " << p.injection_power_mw << " "
      << (p.direction == PumpDirection::Forward ? "forward" : "backward") << "\n";
  o << "link.spans = " << cfg.n_spans << "\n";
  if (cfg.snr_ase_db) o << "link.snr_ase_db = " << *cfg.snr_ase_db << "\n";
  if (cfg.snr_trx_db) o << "link.snr_trx_db = " << *cfg.snr_trx_db << "\n";
  o << "solver.z_samples = " << cfg.solver.z_samples << "\n";
  o << "solver.rel_tol = " << cfg.solver.rel_tol << "\n";
  o << "solver.bin_width_ghz = " << cfg.solver.channel_bin_width_ghz << "\n";
  o << "nli.backend = " << cfg.nli_backend << "\n";
  o << "nli.exact_fwm = " << (cfg.nli_exact_fwm ? "true" : "false") << "\n";
  o << "nli.raw_profile = " << (cfg.nli_raw_profile ? "true" : "false") << "\n";
  o << "nli.scalar_polarization = " << (cfg.nli_scalar_polarization ? "true" : "false") << "\n";
  o << "ssfm.symbols = " << cfg.ssfm.symbols_per_channel << "\n";
  o << "ssfm.samples_per_symbol = " << cfg.ssfm.samples_per_symbol << "\n";
  o << "ssfm.seed = " << cfg.ssfm.seed << "\n";
  o << "ssfm.max_phase_mrad = " << cfg.ssfm.max_nonlinear_phase_rad * 1e3 << "\n";
  if (cfg.has_pump_problem) {
    for (size_t i = 0; i < cfg.pump_problem.candidate_wavelengths_nm.size(); ++i)
      o << "opt.candidate = " << cfg.pump_problem.candidate_wavelengths_nm[i] << " "
        << cfg.pump_problem.power_cap_mw[i] << "\n";
    o << "opt.band_lo_nm = " << nm_from_thz(cfg.pump_problem.band_hi_thz) << "\n";
    o << "opt.band_hi_nm = " << nm_from_thz(cfg.pump_problem.band_lo_thz) << "\n";
    o << "opt.tolerance_db = " << cfg.pump_problem.recovery_tolerance_db << "\n";
    o << "opt.band_average = " << (cfg.pump_problem.band_average ? "true" : "false") << "\n";
    o << "opt.seed = " << cfg.pump_problem.seed << "\n";
    o << "opt.population = " << cfg.pump_problem.population << "\n";
    o << "opt.generations = " << cfg.pump_problem.generations << "\n";
  }
  return o.str();
}

}  // namespace rgn
