// Command-line front end: configuration ingestion, subcommand dispatch and
// CSV/JSON result emission for the NLI engine.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "rgn/config.hpp"
#include "rgn/csv.hpp"
#include "rgn/derived_terms.hpp"
#include "rgn/gn_closed_form.hpp"
#include "rgn/gn_integral.hpp"
#include "rgn/link_function.hpp"
#include "rgn/profile_fit.hpp"
#include "rgn/pump_optimizer.hpp"
#include "rgn/raman_solver.hpp"
#include "rgn/ssfm.hpp"
#include "rgn/units.hpp"
#include "rgn/version.hpp"

namespace {

// machine-readable error categories for nonzero exits
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kIoError = 3,
  kNumericsError = 4,
  kInfeasible = 5,
  kInternal = 10,
};

struct Cli {
  std::string config_path;
  std::string output_dir = ".";
  std::string backend;       // override
  int spans = -1;            // override
  long long seed = -1;       // override
  std::string format = "csv";
  bool strict = true;
};

std::vector<std::string> meta_lines(const rgn::RunConfig& cfg, const std::string& backend) {
  return {std::string("engine_version=") + rgn::kEngineVersion,
          "config_sha256=" + cfg.config_sha256, "backend=" + backend};
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

rgn::PowerProfile solve(const rgn::RunConfig& cfg) {
  return rgn::solve_profile(cfg.fiber, cfg.plan, cfg.pumps, cfg.solver);
}

int cmd_profile(const Cli& cli, const rgn::RunConfig& cfg) {
  const rgn::PowerProfile prof = solve(cfg);
  std::vector<std::string> header{"z_km"};
  for (const auto& c : prof.components) {
    std::string name = (c.is_pump ? "pump_" : "ch_") + std::to_string(c.index) + "_dbm";
    header.push_back(name);
  }
  std::vector<std::vector<double>> rows;
  for (size_t g = 0; g < prof.z_km.size(); ++g) {
    std::vector<double> row{prof.z_km[g]};
    for (size_t c = 0; c < prof.n_components(); ++c)
      row.push_back(rgn::dbm_from_mw(std::max(prof.power_mw[c][g], 1e-30)));
    rows.push_back(std::move(row));
  }
  rgn::write_csv(cli.output_dir + "/profile.csv", meta_lines(cfg, "solver"), header, rows);
  std::cout << "wrote " << cli.output_dir << "/profile.csv (" << prof.n_components()
            << " components, " << prof.z_km.size() << " z samples)\n";
  return kOk;
}

int cmd_fit(const Cli& cli, const rgn::RunConfig& cfg) {
  const rgn::PowerProfile prof = solve(cfg);
  const rgn::FittedCoeffs fc = rgn::fit_profile(prof, cfg.plan, cfg.pumps);
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < fc.per_channel.size(); ++k) {
    const auto& f = fc.per_channel[k];
    rows.push_back({static_cast<double>(k), cfg.plan.channels[k].center_frequency_thz, f.alpha,
                    f.alpha_f, f.alpha_b, f.C_f * 1e3, f.C_b * 1e3, f.rms_db});
  }
  rgn::write_csv(cli.output_dir + "/fitted_coeffs.csv", meta_lines(cfg, "fit"),
                 {"channel_index", "f_k_thz", "alpha_k_per_km", "alpha_f_per_km",
                  "alpha_b_per_km", "C_f_per_w_km_thz", "C_b_per_w_km_thz", "rms_db"},
                 rows);
  double worst = 0.0;
  for (const auto& f : fc.per_channel) worst = std::max(worst, f.rms_db);
  std::cout << "wrote " << cli.output_dir << "/fitted_coeffs.csv (worst rms "
            << rgn::format_cell(worst) << " dB)\n";
  return kOk;
}

rgn::NliResult run_nli(const rgn::RunConfig& cfg, const std::string& backend, int n_spans,
                       rgn::PowerProfile& prof_out, rgn::DerivedTerms& terms_out) {
  prof_out = solve(cfg);
  const rgn::FittedCoeffs fc = rgn::fit_profile(prof_out, cfg.plan, cfg.pumps);
  terms_out = rgn::derive_terms(fc, cfg.pumps, cfg.fiber, cfg.plan);
  rgn::GnContext ctx = rgn::make_gn_context(cfg.fiber, cfg.plan, &terms_out, &prof_out);
  ctx.use_raw_profile = cfg.nli_raw_profile;
  ctx.exact_fwm = cfg.nli_exact_fwm;
  ctx.scalar_polarization = cfg.nli_scalar_polarization;
  const rgn::NliBackend b =
      backend == "integral" ? rgn::NliBackend::Integral : rgn::NliBackend::Closed;
  return rgn::evaluate_nli(ctx, b, n_spans);
}

int cmd_nli(const Cli& cli, const rgn::RunConfig& cfg, const std::string& backend, int n_spans) {
  rgn::PowerProfile prof;
  rgn::DerivedTerms terms;
  const rgn::NliResult res = run_nli(cfg, backend, n_spans, prof, terms);
  std::vector<std::vector<double>> rows;
  nlohmann::json jrows = nlohmann::json::array();
  for (size_t i = 0; i < res.per_channel.size(); ++i) {
    const auto& r = res.per_channel[i];
    const auto s = rgn::snr_assemble(r.eta_total, cfg.plan.channels[i].launch_power_mw,
                                     cfg.snr_ase_db, cfg.snr_trx_db);
    rows.push_back({r.wavelength_nm, r.eta_gn, r.eta_corr, r.eta_total, r.snr_nli_db,
                    s.snr_total_db});
    jrows.push_back({{"wavelength_nm", r.wavelength_nm},
                     {"eta_gn_per_mw2", r.eta_gn},
                     {"eta_corr_per_mw2", r.eta_corr},
                     {"eta_total_per_mw2", r.eta_total},
                     {"snr_nli_db", r.snr_nli_db},
                     {"snr_total_db", s.snr_total_db}});
  }
  if (cli.format == "json") {
    nlohmann::json j{{"engine_version", rgn::kEngineVersion},
                     {"config_sha256", cfg.config_sha256},
                     {"backend", res.backend},
                     {"n_spans", res.n_spans},
                     {"channels", jrows}};
    write_json(cli.output_dir + "/nli.json", j);
    std::cout << "wrote " << cli.output_dir << "/nli.json\n";
  } else {
    rgn::write_csv(cli.output_dir + "/nli.csv", meta_lines(cfg, res.backend),
                   {"wavelength_nm", "eta_gn_per_mw2", "eta_corr_per_mw2", "eta_total_per_mw2",
                    "snr_nli_db", "snr_total_db"},
                   rows);
    std::cout << "wrote " << cli.output_dir << "/nli.csv (" << rows.size() << " channels, "
              << res.backend << " backend, " << n_spans << " span(s))\n";
  }
  return kOk;
}

int cmd_validate(const Cli& cli, const rgn::RunConfig& cfg, int n_spans) {
  rgn::PowerProfile prof;
  rgn::DerivedTerms terms;
  const rgn::NliResult closed = run_nli(cfg, "closed", n_spans, prof, terms);
  const rgn::NliResult integral = run_nli(cfg, "integral", n_spans, prof, terms);
  std::vector<std::vector<double>> rows;
  double max_gn = 0.0, max_corr = 0.0;
  for (size_t i = 0; i < closed.per_channel.size(); ++i) {
    const auto& c = closed.per_channel[i];
    const auto& g = integral.per_channel[i];
    const double d_gn =
        (c.eta_gn > 0 && g.eta_gn > 0) ? 10.0 * std::log10(c.eta_gn / g.eta_gn) : 0.0;
    const bool corr_ok = c.eta_corr != 0.0 && g.eta_corr != 0.0 &&
                         (c.eta_corr > 0) == (g.eta_corr > 0);
    const double d_corr = corr_ok ? 10.0 * std::log10(c.eta_corr / g.eta_corr) : 0.0;
    max_gn = std::max(max_gn, std::abs(d_gn));
    max_corr = std::max(max_corr, std::abs(d_corr));
    rows.push_back({c.wavelength_nm, c.eta_gn, g.eta_gn, d_gn, c.eta_corr, g.eta_corr, d_corr});
  }
  rgn::write_csv(cli.output_dir + "/validate.csv", meta_lines(cfg, "closed-vs-integral"),
                 {"wavelength_nm", "eta_gn_closed", "eta_gn_integral", "delta_gn_db",
                  "eta_corr_closed", "eta_corr_integral", "delta_corr_db"},
                 rows);
  std::cout << "wrote " << cli.output_dir << "/validate.csv  max |delta_gn| = "
            << rgn::format_cell(max_gn) << " dB, max |delta_corr| = " << rgn::format_cell(max_corr)
            << " dB\n";
  return kOk;
}

int cmd_optimize(const Cli& cli, const rgn::RunConfig& cfg, long long seed) {
  if (!cfg.has_pump_problem) {
    std::cerr << "error: config: no opt.candidate entries in config\n";
    return kConfigError;
  }
  rgn::PumpProblem pb = cfg.pump_problem;
  if (seed >= 0) pb.seed = static_cast<uint64_t>(seed);
  const rgn::PumpOptimizationReport rep =
      rgn::optimize_pumps(pb, cfg.fiber, cfg.plan, cfg.solver);
  std::vector<std::vector<double>> rows;
  for (const auto& p : rep.pumps.pumps)
    rows.push_back({p.wavelength_nm, p.injection_power_mw});
  rgn::write_csv(cli.output_dir + "/pumps.csv", meta_lines(cfg, "optimizer"),
                 {"wavelength_nm", "power_mw"}, rows);
  std::vector<std::vector<double>> trows;
  for (const auto& t : rep.trace)
    trows.push_back({static_cast<double>(t.iteration), t.cost_mw, t.max_violation_db,
                     t.feasible ? 1.0 : 0.0});
  rgn::write_csv(cli.output_dir + "/pump_trace.csv", meta_lines(cfg, "optimizer"),
                 {"iteration", "cost_mw", "max_violation_db", "feasible"}, trows);
  std::cout << "wrote " << cli.output_dir << "/pumps.csv (cost " << rgn::format_cell(rep.cost_mw)
            << " mW, " << (rep.feasible ? "feasible" : "INFEASIBLE") << ")\n";
  if (!rep.feasible) {
    std::cerr << "error: infeasible: no bound-respecting allocation met the tolerance\n";
    return kInfeasible;
  }
  return kOk;
}

int cmd_ssfm(const Cli& cli, const rgn::RunConfig& cfg, int n_spans, long long seed) {
  rgn::SsfmConfig sc = cfg.ssfm;
  if (seed >= 0) sc.seed = static_cast<uint64_t>(seed);
  const rgn::PowerProfile prof = solve(cfg);
  const rgn::SsfmResult sim = rgn::simulate_link(sc, cfg.fiber, cfg.plan, prof, n_spans);

  const rgn::FittedCoeffs fc = rgn::fit_profile(prof, cfg.plan, cfg.pumps);
  const rgn::DerivedTerms terms = rgn::derive_terms(fc, cfg.pumps, cfg.fiber, cfg.plan);
  rgn::GnContext ctx = rgn::make_gn_context(cfg.fiber, cfg.plan, &terms, &prof);
  ctx.scalar_polarization = true;  // scalar NLSE comparison mode
  ctx.use_raw_profile = cfg.nli_raw_profile;
  ctx.exact_fwm = cfg.nli_exact_fwm;

  std::vector<std::vector<double>> rows;
  for (size_t c = 0; c < cfg.plan.channels.size(); ++c) {
    const double meas = rgn::measure_snr_nli_db(sim.tx[c], sim.rx[c]);
    const double eta = rgn::eta_gn_integral(ctx, c, n_spans) + rgn::eta_corr_integral(ctx, c, n_spans);
    const auto s = rgn::snr_assemble(eta, cfg.plan.channels[c].launch_power_mw);
    rows.push_back({rgn::nm_from_thz(cfg.plan.channels[c].center_frequency_thz), meas,
                    s.snr_nli_db, meas - s.snr_nli_db});
  }
  auto meta = meta_lines(cfg, "ssfm");
  meta.push_back("seed=" + std::to_string(sim.seed));
  meta.push_back("sim_digest=" + sim.config_digest);
  rgn::write_csv(cli.output_dir + "/ssfm.csv", meta,
                 {"wavelength_nm", "snr_nli_measured_db", "snr_nli_model_db", "delta_db"}, rows);
  std::cout << "wrote " << cli.output_dir << "/ssfm.csv (" << sim.n_steps_per_span
            << " steps/span)\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quality-of-transmission engine for Raman-amplified WDM links"};
  app.set_version_flag("--version", rgn::kEngineVersion);
  Cli cli;
  app.add_option("--config", cli.config_path, "configuration file")->required();
  app.add_option("--output", cli.output_dir, "output directory");
  app.add_option("--backend", cli.backend, "closed|integral (overrides config)");
  app.add_option("--spans", cli.spans, "span count (overrides config)");
  app.add_option("--seed", cli.seed, "seed (overrides config)");
  app.add_option("--format", cli.format, "csv|json");
  app.add_flag("--strict,!--no-strict", cli.strict, "reject unknown config keys (default on)");

  auto* sub_profile = app.add_subcommand("profile", "solve the span power profile and export it");
  auto* sub_fit = app.add_subcommand("fit", "fit profile coefficients and export them");
  auto* sub_nli = app.add_subcommand("nli", "per-channel NLI and SNR");
  auto* sub_opt = app.add_subcommand("optimize-pumps", "minimal-power pump allocation");
  auto* sub_val = app.add_subcommand("validate", "closed-form vs integral report");
  auto* sub_ssfm = app.add_subcommand("ssfm", "desk-scale split-step validation");
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(cli.output_dir);
    const rgn::RunConfig cfg = rgn::parse_config(cli.config_path, cli.strict);
    const std::string backend = cli.backend.empty() ? cfg.nli_backend : cli.backend;
    if (backend != "closed" && backend != "integral") {
      std::cerr << "error: config: backend must be closed or integral\n";
      return kConfigError;
    }
    const int n_spans = cli.spans > 0 ? cli.spans : cfg.n_spans;

    if (sub_profile->parsed()) return cmd_profile(cli, cfg);
    if (sub_fit->parsed()) return cmd_fit(cli, cfg);
    if (sub_nli->parsed()) return cmd_nli(cli, cfg, backend, n_spans);
    if (sub_opt->parsed()) return cmd_optimize(cli, cfg, cli.seed);
    if (sub_val->parsed()) return cmd_validate(cli, cfg, n_spans);
    if (sub_ssfm->parsed()) return cmd_ssfm(cli, cfg, n_spans, cli.seed);
    std::cerr << "error: config: no subcommand\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    const bool io = msg.find("cannot") != std::string::npos ||
                    msg.find("missing header") != std::string::npos;
    std::cerr << "error: " << (io ? "io" : "numerics") << ": " << msg << "\n";
    return io ? kIoError : kNumericsError;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kInternal;
  }
}
