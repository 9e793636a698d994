#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "biphoton/scans.hpp"

namespace biphoton {

// Provenance embedded in every artifact.
struct Stamp {
  std::string config_hash;
  std::uint64_t seed = 0;
};

struct MatrixHeader {
  std::string domain;  // e.g. far_field_angle
  std::string row_axis = "theta_i";
  std::string col_axis = "theta_s";
  std::string units = "deg";
  std::string quantity = "tpi";
};

// Two comment lines (axes/units, provenance), then a row holding the column axis, then one row
// per row-axis sample led by its coordinate. Rows flagged in `missing` are written as nan.
std::string matrix_csv(const std::vector<double>& rows, const std::vector<double>& cols, const Eigen::MatrixXd& values,
                       const MatrixHeader& header, const Stamp& stamp, const std::vector<bool>& missing = {});

// Binary 16-bit PGM (P5), big-endian, row-major, linear in value with 65535 at the recorded max.
std::string pgm16(const Eigen::MatrixXd& values, const Stamp& stamp, const std::vector<bool>& missing = {});

// "# seed=..." line, then columns position, raw, accidental, corrected, expected.
std::string scan_csv(const ScanResult& scan, const Stamp& stamp);

// Reads scan_csv output (or any CSV with that header). Comment lines other than the
// metadata line are ignored.
ScanResult parse_scan_csv(std::string_view text);

void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace biphoton
