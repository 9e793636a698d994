#include "biphoton/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "biphoton/artifacts.hpp"
#include "biphoton/error.hpp"
#include "biphoton/fitting.hpp"
#include "biphoton/metrics.hpp"
#include "biphoton/nearfield.hpp"

namespace biphoton {
namespace {

using json = nlohmann::ordered_json;

struct Context {
  const RunConfig& cfg;
  const CommandOptions& opts;
  Stamp stamp;
  std::vector<std::string> written;

  void write(const std::string& name, std::string_view content) {
    write_file(cfg.output_dir / name, content);
    written.push_back((cfg.output_dir / name).generic_string());
  }

  void write_json(const std::string& name, json body) {
    json doc;
    doc["config_hash"] = stamp.config_hash;
    doc["seed"] = stamp.seed;
    for (auto& [k, v] : body.items()) doc[k] = v;
    write(name, doc.dump(2) + "\n");
  }
};

json convention_json(const WidthConvention& c) {
  json j;
  j["kind"] = std::string(to_string(c.kind));
  if (c.slice_at) j["slice_deg"] = *c.slice_at;
  else j["slice"] = "marginal_peak";
  return j;
}

json fit_json(const FitResult& f) {
  json j;
  json params = json::object();
  for (const auto& name : f.names) params[name] = {{"value", f.value(name)}, {"sigma", f.sigma(name)}};
  j["parameters"] = params;
  json cov = json::array();
  for (Eigen::Index r = 0; r < f.covariance.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < f.covariance.cols(); ++c) row.push_back(f.covariance(r, c));
    cov.push_back(row);
  }
  j["covariance"] = cov;
  j["residual_norm"] = f.residual_norm;
  j["iterations"] = f.iterations;
  j["converged"] = f.converged;
  j["message"] = f.message;
  j["warnings"] = f.warnings;
  return j;
}

JointAmplitude angle_amplitude(const RunConfig& cfg) { return build_joint_amplitude(cfg.setup, cfg.grid); }

void cmd_tpi(Context& ctx) {
  const auto amp = angle_amplitude(ctx.cfg);
  const Eigen::MatrixXd tpi = amp.intensity();
  MatrixHeader h{std::string(to_string(amp.domain)), "theta_i", "theta_s", "deg", "tpi_per_deg2"};
  ctx.write("tpi.csv", matrix_csv(amp.axis_i, amp.axis_s, tpi, h, ctx.stamp));
  ctx.write("tpi.pgm", pgm16(tpi, ctx.stamp));
  json body;
  body["command"] = "tpi";
  body["grid"] = {{"theta_max_deg", ctx.cfg.grid.theta_max_deg}, {"n", ctx.cfg.grid.n}};
  body["norm_constant"] = amp.norm_constant;
  body["tpi_max"] = tpi.maxCoeff();
  ctx.write_json("tpi.json", body);
}

void cmd_nearfield(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const bool automatic = !(cfg.nearfield_q_max > 0.0);
  // Automatic grids: the padded propagating range resolves the narrow conditional width; a
  // second, narrower wavevector span opens a position window of +-8 pump widths for the marginal.
  const WavevectorGrid grid = automatic ? propagating_wavevector_grid(cfg.setup, cfg.nearfield_n, 2.5)
                                        : WavevectorGrid{cfg.nearfield_q_max, cfg.nearfield_n};
  const double window_q = std::numbers::pi * (cfg.nearfield_n - 1) / (16.0 * cfg.setup.pump_amplitude_std_um());
  const WavevectorGrid window =
      automatic ? WavevectorGrid{std::min(window_q, propagating_wavevector_grid(cfg.setup, cfg.nearfield_n).q_max),
                                 cfg.nearfield_n}
                : grid;
  const auto near = to_near_field(build_joint_amplitude(cfg.setup, grid));
  const auto wide = automatic ? to_near_field(build_joint_amplitude(cfg.setup, window)) : near;

  json widths;
  json warnings = json::array();
  auto attempt = [&](const char* key, const std::function<double()>& f) {
    try {
      widths[key] = f();
    } catch (const ResolutionError& e) {
      widths[key] = nullptr;
      warnings.push_back(std::string(key) + ": " + e.what());
    }
  };
  WidthConvention astd{WidthKind::amplitude_std_dev, std::nullopt};
  WidthConvention fwhm{WidthKind::fwhm, std::nullopt};
  attempt("unconditional_amplitude_std_um", [&] { return marginal_width(wide, Party::idler, astd); });
  attempt("unconditional_fwhm_um", [&] { return marginal_width(wide, Party::idler, fwhm); });
  attempt("conditional_fwhm_um", [&] { return conditional_width(near, fwhm); });

  const int n = static_cast<int>(near.axis_i.size());
  const int keep = std::min(cfg.nearfield_export_n, n);
  const int first = n / 2 - keep / 2;
  const std::vector<double> xi(near.axis_i.begin() + first, near.axis_i.begin() + first + keep);
  const std::vector<double> xs(near.axis_s.begin() + first, near.axis_s.begin() + first + keep);
  const Eigen::MatrixXd crop = near.values.block(first, first, keep, keep).cwiseAbs2();
  MatrixHeader h{"near_field_position", "x_i", "x_s", "um", "probability_per_um2"};
  ctx.write("nearfield.csv", matrix_csv(xi, xs, crop, h, ctx.stamp));
  ctx.write("nearfield.pgm", pgm16(crop, ctx.stamp));

  json body;
  body["command"] = "nearfield";
  body["wavevector_grid"] = {{"q_max_per_um", grid.q_max}, {"n", grid.n}};
  body["position_step_um"] = near.step_i();
  body["position_half_span_um"] = near.axis_i.back();
  body["unconditional_wavevector_grid"] = {{"q_max_per_um", window.q_max}, {"n", window.n}};
  body["unconditional_position_half_span_um"] = wide.axis_i.back();
  body["total_probability"] = near.total_probability();
  body["widths"] = widths;
  body["warnings"] = warnings;
  ctx.write_json("nearfield.json", body);
}

void cmd_report(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const JointAmplitude amp =
      cfg.report_domain == "wavevector"
          ? build_joint_amplitude(cfg.setup, propagating_wavevector_grid(cfg.setup, cfg.grid.n))
          : angle_amplitude(cfg);
  const auto rep = entanglement_report(amp, cfg.setup, cfg.convention);
  json body;
  body["command"] = "report";
  body["domain"] = std::string(to_string(amp.domain));
  body["units"] = rep.units;
  body["convention"] = convention_json(rep.convention);
  body["delta_unconditional"] = rep.delta_unconditional;
  body["delta_conditional"] = rep.delta_conditional;
  body["R_1D"] = rep.r_1d;
  body["R_2D"] = rep.r_2d;
  body["R_2D_note"] = rep.r2d_note;
  body["K"] = rep.k_main;
  body["K_full"] = rep.k_full;
  body["K_note"] = "K is taken over the main phase-matching lobe; K_full includes the side lobes";
  body["eigenvalues"] = rep.eigenvalues;
  body["setup"] = {{"length_um", cfg.setup.length_um},
                   {"waist_um", cfg.setup.waist_um},
                   {"pump_nm", cfg.setup.pump_nm},
                   {"signal_nm", cfg.setup.signal_nm},
                   {"idler_nm", cfg.setup.idler_nm},
                   {"dispersion", cfg.dispersion}};
  ctx.write_json("report.json", body);
}

ScanResult simulated_knife(const RunConfig& cfg) {
  const auto amp = angle_amplitude(cfg);
  return subtract_accidentals(knife_edge_scan(amp, cfg.knife_positions_deg, cfg.counting));
}

ScanResult simulated_slit(const RunConfig& cfg) {
  const auto amp = angle_amplitude(cfg);
  return subtract_accidentals(slit_scan(amp, cfg.slit_centers_deg, cfg.slit_width_deg, cfg.counting));
}

void cmd_scan_knife(Context& ctx) { ctx.write("knife.csv", scan_csv(simulated_knife(ctx.cfg), ctx.stamp)); }

void cmd_scan_slit(Context& ctx) { ctx.write("slit.csv", scan_csv(simulated_slit(ctx.cfg), ctx.stamp)); }

void cmd_scan_set(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto amp = angle_amplitude(cfg);
  const auto rec = set_scan(amp, cfg.set, cfg.set_noise ? &cfg.counting : nullptr);
  MatrixHeader h{"far_field_angle", "theta_seed", "theta_s", "deg", "set_intensity"};
  ctx.write("set_tpi.csv", matrix_csv(rec.seed_angles_deg, rec.camera_deg, rec.intensity, h, ctx.stamp, rec.missing));
  ctx.write("set_tpi.pgm", pgm16(rec.intensity, ctx.stamp, rec.missing));
  json missing = json::array();
  for (std::size_t j = 0; j < rec.missing.size(); ++j) {
    if (rec.missing[j]) missing.push_back(rec.seed_angles_deg[j]);
  }
  json body;
  body["command"] = "scan-set";
  body["rows"] = rec.seed_angles_deg.size();
  body["missing_rows"] = missing.size();
  body["missing_seed_angles_deg"] = missing;
  body["mask_deg"] = {cfg.set.mask_from_deg, cfg.set.mask_to_deg};
  body["noise"] = cfg.set_noise;
  ctx.write_json("set.json", body);
}

ScanResult load_or_simulate(Context& ctx, const char* name, ScanResult (*simulate)(const RunConfig&)) {
  if (ctx.opts.data) return parse_scan_csv(read_file(*ctx.opts.data));
  auto scan = simulate(ctx.cfg);
  ctx.write(name, scan_csv(scan, ctx.stamp));
  return scan;
}

void cmd_fit_knife(Context& ctx) {
  const auto scan = load_or_simulate(ctx, "knife.csv", simulated_knife);
  const auto fit = fit_knife_profile(scan, ctx.cfg.setup, ctx.cfg.grid);
  json body;
  body["command"] = "fit-knife";
  body["data"] = ctx.opts.data ? ctx.opts.data->generic_string() : std::string("simulated");
  body["prior_length_um"] = ctx.cfg.setup.length_um;
  body["fit"] = fit_json(fit);
  ctx.write_json("fit_knife.json", body);
}

void cmd_fit_slit(Context& ctx) {
  const auto scan = load_or_simulate(ctx, "slit.csv", simulated_slit);
  const auto fit = fit_gaussian(scan);
  json body;
  body["command"] = "fit-slit";
  body["data"] = ctx.opts.data ? ctx.opts.data->generic_string() : std::string("simulated");
  body["fit"] = fit_json(fit);
  ctx.write_json("fit_slit.json", body);
}

void cmd_sweep(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto rows =
      parameter_scan(cfg.setup, cfg.sweep_length_um, cfg.sweep_waist_um, cfg.grid, cfg.convention, cfg.sweep_schmidt);
  std::string out = "# config_hash=" + ctx.stamp.config_hash + " seed=" + std::to_string(ctx.stamp.seed) +
                    " width=" + std::string(to_string(cfg.convention.kind)) + " units=deg\n";
  out += "length_um,waist_um,delta_unconditional,delta_conditional,r_1d,k,error\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out += format_number(r.length_um) + "," + format_number(r.waist_um) + "," +
           (r.error.empty() ? format_number(r.delta_unconditional) + "," + format_number(r.delta_conditional) + "," +
                                  format_number(r.r_1d) + "," + (cfg.sweep_schmidt ? format_number(r.k) : "")
                            : std::string(",,,")) +
           "," + err + "\n";
  }
  ctx.write("sweep.csv", out);
}

void cmd_budget(Context& ctx) {
  const auto b = efficiency_budget(ctx.cfg.efficiency);
  const auto& e = ctx.cfg.efficiency;
  json body;
  body["command"] = "budget";
  body["inputs"] = {{"detector_qe", e.detector_qe},
                    {"filter_transmission", e.filter_transmission},
                    {"fresnel_loss", e.fresnel_loss},
                    {"coupling", e.coupling}};
  body["per_photon"] = b.per_photon;
  body["pair"] = b.pair;
  ctx.write_json("budget.json", body);
}

const std::map<std::string, void (*)(Context&), std::less<>>& table() {
  static const std::map<std::string, void (*)(Context&), std::less<>> t{
      {"tpi", cmd_tpi},           {"nearfield", cmd_nearfield}, {"report", cmd_report},
      {"scan-knife", cmd_scan_knife}, {"scan-slit", cmd_scan_slit}, {"scan-set", cmd_scan_set},
      {"fit-knife", cmd_fit_knife}, {"fit-slit", cmd_fit_slit},  {"sweep", cmd_sweep},
      {"budget", cmd_budget}};
  return t;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"tpi",       "nearfield", "report",   "scan-knife", "scan-slit",
                                              "scan-set", "fit-knife", "fit-slit", "sweep",      "budget"};
  return names;
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error) || dynamic_cast<const ArgumentError*>(&error)) return exit_usage;
  if (dynamic_cast<const IoError*>(&error)) return exit_io;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&error)) return exit_io;
  return exit_domain;
}

std::string error_report(const std::exception& error) {
  json j;
  const int code = exit_code_for(error);
  j["error"]["class"] = code == exit_usage ? "usage" : code == exit_io ? "io" : "domain";
  j["error"]["exit_code"] = code;
  j["error"]["message"] = error.what();
  if (const auto* ce = dynamic_cast<const ConfigError*>(&error)) {
    json issues = json::array();
    for (const auto& i : ce->issues()) issues.push_back({{"key", i.key}, {"line", i.line}, {"message", i.message}});
    j["error"]["issues"] = issues;
  }
  return j.dump();
}

int run_command(std::string_view command, const RunConfig& config, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  try {
    const auto it = table().find(command);
    if (it == table().end()) throw ArgumentError("unknown command '" + std::string(command) + "'");
    Context ctx{config, options, Stamp{config_hash_hex(config), config.counting.rng_seed}, {}};
    it->second(ctx);
    if (!options.quiet) {
      json j;
      j["command"] = std::string(command);
      j["artifacts"] = ctx.written;
      out << j.dump() << "\n";
    }
    return exit_ok;
  } catch (const std::exception& e) {
    err << error_report(e) << "\n";
    return exit_code_for(e);
  }
}

}  // namespace biphoton
