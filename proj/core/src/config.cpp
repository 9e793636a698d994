#include "biphoton/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "biphoton/error.hpp"
#include "biphoton/keyvalue.hpp"

namespace biphoton {
namespace {

template <typename T>
void assign(std::optional<T> v, T& target) {
  if (v) target = std::move(*v);
}

void positive(KeyValueReader& r, std::string_view key, double v) {
  if (!(v > 0.0)) r.issue(key, "must be > 0, got " + format_number(v));
}

void non_negative(KeyValueReader& r, std::string_view key, double v) {
  if (!(v >= 0.0)) r.issue(key, "must be >= 0, got " + format_number(v));
}

void unit_interval(KeyValueReader& r, std::string_view key, double v) {
  if (!(v >= 0.0 && v <= 1.0)) r.issue(key, "must lie in [0, 1], got " + format_number(v));
}

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (j) s += ", ";
    s += format_number(values[j]);
  }
  return s;
}

IndexModel resolve_dispersion(const std::string& name, double constant) {
  if (name == "constant") return IndexModel::constant(constant);
  const std::filesystem::path p(name);
  if (p.has_parent_path() || p.has_extension()) return IndexModel::load(p);
  return IndexModel::builtin(name);
}

std::string canonical(const RunConfig& c, bool with_output_dir) {
  std::ostringstream o;
  const auto& s = c.setup;
  o << "seed = " << c.counting.rng_seed << "\n";
  if (with_output_dir) o << "output_dir = " << c.output_dir.generic_string() << "\n";
  o << "\n[crystal]\n"
    << "length_um = " << format_number(s.length_um) << "\n"
    << "dispersion = " << c.dispersion << "\n"
    << "index_constant = " << format_number(c.index_constant) << "\n"
    << "refraction = " << (s.refraction ? "true" : "false") << "\n"
    << "phase_matching = " << (s.phase_matching == PhaseMatching::collinear ? "collinear" : "none") << "\n"
    << "phasematch_exponent = " << s.phasematch_exponent << "\n"
    << "\n[pump]\n"
    << "waist_um = " << format_number(s.waist_um) << "\n"
    << "waist_convention = " << (s.waist_convention == WaistConvention::beam_radius ? "beam_radius" : "std_dev")
    << "\n"
    << "wavelength_nm = " << format_number(s.pump_nm) << "\n"
    << "\n[signal]\nwavelength_nm = " << format_number(s.signal_nm) << "\n"
    << "\n[idler]\nwavelength_nm = " << format_number(s.idler_nm) << "\n"
    << "\n[grid]\n"
    << "theta_max_deg = " << format_number(c.grid.theta_max_deg) << "\n"
    << "n = " << c.grid.n << "\n"
    << "\n[width]\n"
    << "kind = " << to_string(c.convention.kind) << "\n";
  if (c.convention.slice_at) o << "slice_deg = " << format_number(*c.convention.slice_at) << "\n";
  o << "\n[report]\ndomain = " << c.report_domain << "\n"
    << "\n[nearfield]\n"
    << "n = " << c.nearfield_n << "\n"
    << "q_max_per_um = " << format_number(c.nearfield_q_max) << "\n"
    << "export_n = " << c.nearfield_export_n << "\n"
    << "\n[counting]\n"
    << "acquisition_time_s = " << format_number(c.counting.acquisition_time_s) << "\n"
    << "coincidence_window_ns = " << format_number(c.counting.coincidence_window_ns) << "\n"
    << "singles_rate_signal_hz = " << format_number(c.counting.singles_rate_signal_hz) << "\n"
    << "singles_rate_idler_hz = " << format_number(c.counting.singles_rate_idler_hz) << "\n"
    << "pair_rate_open_hz = " << format_number(c.counting.pair_rate_open_hz) << "\n"
    << "\n[efficiency]\n"
    << "detector_qe = " << format_number(c.efficiency.detector_qe) << "\n"
    << "filter_transmission = " << format_number(c.efficiency.filter_transmission) << "\n"
    << "fresnel_loss = " << format_number(c.efficiency.fresnel_loss) << "\n"
    << "coupling = " << format_number(c.efficiency.coupling) << "\n"
    << "\n[set]\n"
    << "seed_angles_deg = " << join(c.set.seed_angles_deg) << "\n"
    << "camera_theta_max_deg = " << format_number(c.set.camera.theta_max_deg) << "\n"
    << "camera_n = " << c.set.camera.n << "\n"
    << "mask_from_deg = " << format_number(c.set.mask_from_deg) << "\n"
    << "mask_to_deg = " << format_number(c.set.mask_to_deg) << "\n"
    << "gain = " << format_number(c.set.gain) << "\n"
    << "noise = " << (c.set_noise ? "true" : "false") << "\n"
    << "\n[knife]\npositions_deg = " << join(c.knife_positions_deg) << "\n"
    << "\n[slit]\n"
    << "centers_deg = " << join(c.slit_centers_deg) << "\n"
    << "width_deg = " << format_number(c.slit_width_deg) << "\n"
    << "\n[sweep]\n"
    << "length_um = " << join(c.sweep_length_um) << "\n"
    << "waist_um = " << join(c.sweep_waist_um) << "\n"
    << "schmidt = " << (c.sweep_schmidt ? "true" : "false") << "\n";
  return o.str();
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

RunConfig parse_config(std::string_view text) {
  const auto doc = KeyValueDocument::parse(text);
  KeyValueReader r(doc);
  RunConfig c;
  auto& s = c.setup;

  if (auto v = r.unsigned_integer("seed")) c.counting.rng_seed = *v;
  if (auto v = r.text("output_dir")) c.output_dir = *v;

  assign(r.require("crystal.length_um", r.number("crystal.length_um")), s.length_um);
  assign(r.text("crystal.dispersion"), c.dispersion);
  assign(r.number("crystal.index_constant"), c.index_constant);
  assign(r.boolean("crystal.refraction"), s.refraction);
  if (auto v = r.text("crystal.phase_matching")) {
    if (*v == "none") s.phase_matching = PhaseMatching::none;
    else if (*v == "collinear") s.phase_matching = PhaseMatching::collinear;
    else r.issue("crystal.phase_matching", "expected none or collinear, got '" + *v + "'");
  }
  if (auto v = r.integer("crystal.phasematch_exponent")) {
    if (*v != 1 && *v != 2) r.issue("crystal.phasematch_exponent", "must be 1 or 2");
    else s.phasematch_exponent = static_cast<int>(*v);
  }
  assign(r.require("pump.waist_um", r.number("pump.waist_um")), s.waist_um);
  if (auto v = r.text("pump.waist_convention")) {
    if (*v == "std_dev") s.waist_convention = WaistConvention::std_dev;
    else if (*v == "beam_radius") s.waist_convention = WaistConvention::beam_radius;
    else r.issue("pump.waist_convention", "expected std_dev or beam_radius, got '" + *v + "'");
  }
  const auto pump = r.require("pump.wavelength_nm", r.number("pump.wavelength_nm"));
  const auto signal = r.require("signal.wavelength_nm", r.number("signal.wavelength_nm"));
  const auto idler = r.require("idler.wavelength_nm", r.number("idler.wavelength_nm"));
  assign(pump, s.pump_nm);
  assign(signal, s.signal_nm);
  assign(idler, s.idler_nm);

  assign(r.number("grid.theta_max_deg"), c.grid.theta_max_deg);
  if (auto v = r.integer("grid.n")) c.grid.n = static_cast<int>(*v);

  if (auto v = r.text("width.kind")) {
    try {
      c.convention.kind = width_kind_from_string(*v);
    } catch (const Error& e) {
      r.issue("width.kind", e.what());
    }
  }
  if (auto v = r.number("width.slice_deg")) c.convention.slice_at = *v;
  assign(r.text("report.domain"), c.report_domain);

  if (auto v = r.integer("nearfield.n")) c.nearfield_n = static_cast<int>(*v);
  assign(r.number("nearfield.q_max_per_um"), c.nearfield_q_max);
  if (auto v = r.integer("nearfield.export_n")) c.nearfield_export_n = static_cast<int>(*v);

  auto& k = c.counting;
  assign(r.number("counting.acquisition_time_s"), k.acquisition_time_s);
  assign(r.number("counting.coincidence_window_ns"), k.coincidence_window_ns);
  assign(r.number("counting.singles_rate_signal_hz"), k.singles_rate_signal_hz);
  assign(r.number("counting.singles_rate_idler_hz"), k.singles_rate_idler_hz);
  assign(r.number("counting.pair_rate_open_hz"), k.pair_rate_open_hz);

  auto& e = c.efficiency;
  assign(r.number("efficiency.detector_qe"), e.detector_qe);
  assign(r.number("efficiency.filter_transmission"), e.filter_transmission);
  assign(r.number("efficiency.fresnel_loss"), e.fresnel_loss);
  assign(r.number("efficiency.coupling"), e.coupling);

  c.set.seed_angles_deg = parse_number_list("-10:10:0.1");
  assign(r.number_list("set.seed_angles_deg"), c.set.seed_angles_deg);
  assign(r.number("set.camera_theta_max_deg"), c.set.camera.theta_max_deg);
  if (auto v = r.integer("set.camera_n")) c.set.camera.n = static_cast<int>(*v);
  assign(r.number("set.mask_from_deg"), c.set.mask_from_deg);
  assign(r.number("set.mask_to_deg"), c.set.mask_to_deg);
  assign(r.number("set.gain"), c.set.gain);
  assign(r.boolean("set.noise"), c.set_noise);

  c.knife_positions_deg = parse_number_list("-1:17:0.5");
  assign(r.number_list("knife.positions_deg"), c.knife_positions_deg);
  c.slit_centers_deg = parse_number_list("-4:4:0.1");
  assign(r.number_list("slit.centers_deg"), c.slit_centers_deg);
  assign(r.number("slit.width_deg"), c.slit_width_deg);

  c.sweep_length_um = {s.length_um};
  c.sweep_waist_um = {s.waist_um};
  assign(r.number_list("sweep.length_um"), c.sweep_length_um);
  assign(r.number_list("sweep.waist_um"), c.sweep_waist_um);
  assign(r.boolean("sweep.schmidt"), c.sweep_schmidt);

  // Invariants, each attributed to the key that carries it.
  positive(r, "crystal.length_um", s.length_um);
  positive(r, "pump.waist_um", s.waist_um);
  positive(r, "pump.wavelength_nm", s.pump_nm);
  positive(r, "signal.wavelength_nm", s.signal_nm);
  positive(r, "idler.wavelength_nm", s.idler_nm);
  positive(r, "crystal.index_constant", c.index_constant);
  if (pump && signal && idler && s.pump_nm > 0 && s.signal_nm > 0 && s.idler_nm > 0) {
    const double lhs = 1.0 / s.pump_nm;
    if (std::abs(lhs - (1.0 / s.signal_nm + 1.0 / s.idler_nm)) > 1e-4 * lhs) {
      r.issue("idler.wavelength_nm", "energy conservation 1/pump = 1/signal + 1/idler violated (conserving idler is " +
                                         format_number(1.0 / (1.0 / s.pump_nm - 1.0 / s.signal_nm)) + " nm)");
    }
  }
  if (c.grid.n < 3 || c.grid.n % 2 == 0) r.issue("grid.n", "must be odd and >= 3");
  if (!(c.grid.theta_max_deg > 0.0 && c.grid.theta_max_deg < 90.0)) r.issue("grid.theta_max_deg", "must lie in (0, 90)");
  if (c.convention.slice_at && !(std::abs(*c.convention.slice_at) <= c.grid.theta_max_deg)) {
    r.issue("width.slice_deg", "must lie inside the angular grid");
  }
  if (c.report_domain != "angle" && c.report_domain != "wavevector") {
    r.issue("report.domain", "expected angle or wavevector, got '" + c.report_domain + "'");
  }
  if (c.nearfield_n < 64 || c.nearfield_n % 2 == 0) r.issue("nearfield.n", "must be odd and >= 64");
  non_negative(r, "nearfield.q_max_per_um", c.nearfield_q_max);
  if (c.nearfield_export_n < 3 || c.nearfield_export_n % 2 == 0 || c.nearfield_export_n > c.nearfield_n) {
    r.issue("nearfield.export_n", "must be odd, >= 3 and <= nearfield.n");
  }
  non_negative(r, "counting.acquisition_time_s", k.acquisition_time_s);
  positive(r, "counting.coincidence_window_ns", k.coincidence_window_ns);
  non_negative(r, "counting.singles_rate_signal_hz", k.singles_rate_signal_hz);
  non_negative(r, "counting.singles_rate_idler_hz", k.singles_rate_idler_hz);
  non_negative(r, "counting.pair_rate_open_hz", k.pair_rate_open_hz);
  unit_interval(r, "efficiency.detector_qe", e.detector_qe);
  unit_interval(r, "efficiency.filter_transmission", e.filter_transmission);
  unit_interval(r, "efficiency.fresnel_loss", e.fresnel_loss);
  unit_interval(r, "efficiency.coupling", e.coupling);
  if (c.set.seed_angles_deg.empty()) r.issue("set.seed_angles_deg", "must not be empty");
  if (!std::is_sorted(c.set.seed_angles_deg.begin(), c.set.seed_angles_deg.end())) {
    r.issue("set.seed_angles_deg", "must be sorted ascending");
  }
  for (double a : c.set.seed_angles_deg) {
    if (!(std::abs(a) <= c.grid.theta_max_deg)) {
      r.issue("set.seed_angles_deg", "seed angle " + format_number(a) + " lies outside the angular grid");
      break;
    }
  }
  if (c.set.camera.n < 3 || c.set.camera.n % 2 == 0) r.issue("set.camera_n", "must be odd and >= 3");
  if (!(c.set.camera.theta_max_deg > 0.0 && c.set.camera.theta_max_deg <= c.grid.theta_max_deg)) {
    r.issue("set.camera_theta_max_deg", "must lie in (0, grid.theta_max_deg]");
  }
  if (c.set.mask_from_deg > c.set.mask_to_deg) r.issue("set.mask_to_deg", "mask interval needs from <= to");
  if (!(std::abs(c.set.mask_from_deg) <= c.grid.theta_max_deg && std::abs(c.set.mask_to_deg) <= c.grid.theta_max_deg)) {
    r.issue("set.mask_from_deg", "mask interval must lie inside the angular grid");
  }
  positive(r, "set.gain", c.set.gain);
  for (double p : c.knife_positions_deg) {
    if (!(std::abs(p) <= c.grid.theta_max_deg)) {
      r.issue("knife.positions_deg", "position " + format_number(p) + " lies outside the angular grid");
      break;
    }
  }
  for (double p : c.slit_centers_deg) {
    if (!(std::abs(p) <= c.grid.theta_max_deg)) {
      r.issue("slit.centers_deg", "center " + format_number(p) + " lies outside the angular grid");
      break;
    }
  }
  if (!(c.slit_width_deg >= 2.0 * c.grid.step() * (1.0 - 1e-12))) {
    r.issue("slit.width_deg", "must span at least two grid steps (" + format_number(2.0 * c.grid.step()) + " deg)");
  }
  if (c.sweep_length_um.empty()) r.issue("sweep.length_um", "must not be empty");
  if (c.sweep_waist_um.empty()) r.issue("sweep.waist_um", "must not be empty");
  for (double v : c.sweep_length_um) {
    if (!(v > 0.0)) {
      r.issue("sweep.length_um", "values must be > 0");
      break;
    }
  }
  for (double v : c.sweep_waist_um) {
    if (!(v > 0.0)) {
      r.issue("sweep.waist_um", "values must be > 0");
      break;
    }
  }

  try {
    s.index_model = resolve_dispersion(c.dispersion, c.index_constant);
    if (r.ok()) s.validate();
  } catch (const Error& err) {
    r.issue(c.dispersion == "constant" ? "crystal.index_constant" : "crystal.dispersion", err.what());
  }
  r.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& config) { return canonical(config, true); }

std::uint64_t config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical(config, false)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash_hex(const RunConfig& config) {
  char buf[17];
  const auto [ptr, ec] = std::to_chars(buf, buf + 16, config_hash(config), 16);
  std::string s(buf, ptr);
  return std::string(16 - s.size(), '0') + s;
}

}  // namespace biphoton
