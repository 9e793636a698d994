#include "biphoton/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "biphoton/config.hpp"
#include "biphoton/error.hpp"

namespace biphoton {
namespace {

std::string stamp_text(const Stamp& s) { return "config_hash=" + s.config_hash + " seed=" + std::to_string(s.seed); }

bool is_missing(const std::vector<bool>& missing, Eigen::Index r) {
  return !missing.empty() && missing[static_cast<std::size_t>(r)];
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, int line) {
  s = trim(s);
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw ArgumentError("scan CSV line " + std::to_string(line) + ": invalid number '" + tmp + "'");
  }
  return v;
}

}  // namespace

std::string matrix_csv(const std::vector<double>& rows, const std::vector<double>& cols, const Eigen::MatrixXd& values,
                       const MatrixHeader& h, const Stamp& stamp, const std::vector<bool>& missing) {
  if (values.rows() != static_cast<Eigen::Index>(rows.size()) ||
      values.cols() != static_cast<Eigen::Index>(cols.size())) {
    throw ArgumentError("matrix dimensions do not match its axes");
  }
  std::string out;
  out += "# domain=" + h.domain + " quantity=" + h.quantity + " rows=" + h.row_axis + " cols=" + h.col_axis +
         " units=" + h.units + " first_column=" + h.row_axis + " first_row=" + h.col_axis + "\n";
  out += "# " + stamp_text(stamp) + "\n";
  out += h.row_axis + "\\" + h.col_axis;
  for (double c : cols) out += "," + format_number(c);
  out += "\n";
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    out += format_number(rows[static_cast<std::size_t>(r)]);
    const bool miss = is_missing(missing, r);
    for (Eigen::Index c = 0; c < values.cols(); ++c) out += miss ? std::string(",nan") : "," + format_number(values(r, c));
    out += "\n";
  }
  return out;
}

std::string pgm16(const Eigen::MatrixXd& values, const Stamp& stamp, const std::vector<bool>& missing) {
  double peak = 0.0;
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    if (!is_missing(missing, r)) peak = std::max(peak, values.row(r).maxCoeff());
  }
  std::string out = "P5\n# max=" + format_number(peak) + " " + stamp_text(stamp) + "\n" +
                    std::to_string(values.cols()) + " " + std::to_string(values.rows()) + "\n65535\n";
  out.reserve(out.size() + static_cast<std::size_t>(values.size()) * 2);
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    const bool miss = is_missing(missing, r);
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      double v = (miss || !(peak > 0.0)) ? 0.0 : values(r, c) / peak;
      const auto q = static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
      out.push_back(static_cast<char>(q >> 8));
      out.push_back(static_cast<char>(q & 0xFF));
    }
  }
  return out;
}

std::string scan_csv(const ScanResult& s, const Stamp& stamp) {
  std::string out = "# seed=" + std::to_string(stamp.seed) + " config_hash=" + stamp.config_hash +
                    " kind=" + std::string(to_string(s.kind)) +
                    " accidentals_subtracted=" + (s.accidentals_subtracted ? "true" : "false") + "\n";
  out += "position,raw,accidental,corrected,expected\n";
  for (std::size_t j = 0; j < s.size(); ++j) {
    out += format_number(s.positions[j]) + "," + format_number(s.raw[j]) + "," + format_number(s.accidental[j]) +
           "," + format_number(s.corrected[j]) + "," + format_number(s.expected[j]) + "\n";
  }
  return out;
}

ScanResult parse_scan_csv(std::string_view text) {
  ScanResult s;
  s.accidentals_subtracted = true;
  bool header_seen = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      for (auto tok : split(line.substr(1), ' ')) {
        tok = trim(tok);
        if (tok == "accidentals_subtracted=false") s.accidentals_subtracted = false;
        if (tok == "kind=slit") s.kind = ScanKind::slit;
        if (tok == "kind=set_row") s.kind = ScanKind::set_row;
        if (tok.starts_with("seed=")) s.counting.rng_seed = std::stoull(std::string(tok.substr(5)));
      }
      continue;
    }
    if (!header_seen) {
      if (line != "position,raw,accidental,corrected,expected") {
        throw ArgumentError("scan CSV line " + std::to_string(line_no) +
                            ": expected header 'position,raw,accidental,corrected,expected'");
      }
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 5) throw ArgumentError("scan CSV line " + std::to_string(line_no) + ": expected 5 columns");
    s.positions.push_back(parse_double(f[0], line_no));
    s.raw.push_back(parse_double(f[1], line_no));
    s.accidental.push_back(parse_double(f[2], line_no));
    s.corrected.push_back(parse_double(f[3], line_no));
    s.expected.push_back(parse_double(f[4], line_no));
  }
  if (!header_seen) throw ArgumentError("scan CSV has no header line");
  return s;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace biphoton
