#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "biphoton/metrics.hpp"
#include "biphoton/scans.hpp"

namespace biphoton {

// Everything one command invocation needs. Defaults for omitted keys are listed in README.
struct RunConfig {
  OpticalSetup setup;
  std::string dispersion = "mgo_ln_e";  // builtin name, file path, or "constant"
  double index_constant = 1.0;
  AngularGrid grid;
  WidthConvention convention;
  std::string report_domain = "angle";  // angle | wavevector
  int nearfield_n = 2049;
  double nearfield_q_max = 0.0;  // rad/um; 0 selects the full propagating range
  int nearfield_export_n = 401;  // central crop written to the matrix artifacts
  CountingConfig counting;
  EfficiencyConfig efficiency;
  SetScanConfig set;
  bool set_noise = false;
  std::vector<double> knife_positions_deg;
  std::vector<double> slit_centers_deg;
  double slit_width_deg = 0.2;
  std::vector<double> sweep_length_um;
  std::vector<double> sweep_waist_um;
  bool sweep_schmidt = true;
  std::filesystem::path output_dir = "out";
};

// Strict: unknown keys, missing required keys, malformed values and violated invariants are all
// collected and thrown together as ConfigError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Canonical text carrying every effective value; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

// FNV-1a 64 of the canonical text without output_dir.
std::uint64_t config_hash(const RunConfig& config);
std::string config_hash_hex(const RunConfig& config);

// Shortest round-trip decimal representation.
std::string format_number(double value);

}  // namespace biphoton
