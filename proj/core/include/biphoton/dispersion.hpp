#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace biphoton {

class KeyValueDocument;

// One term B * lambda^p / (lambda^2 - C) of a generalized Sellmeier expansion, lambda in um.
struct SellmeierTerm {
  double numerator = 0.0;    // B, um^(2-p)
  double pole_um2 = 0.0;     // C, um^2
  int wavelength_power = 2;  // p in {0, 2, 4}
};

// Refractive index n(lambda). Either a constant or
//   n^2 = offset + sum_j B_j lambda^p_j / (lambda^2 - C_j).
class IndexModel {
 public:
  enum class Kind { constant, sellmeier };

  static IndexModel constant(double n);
  static IndexModel sellmeier(double offset, std::vector<SellmeierTerm> terms, double valid_from_nm = 0.0,
                              double valid_to_nm = 0.0);
  // Reads the [index] section of a dispersion data file.
  static IndexModel from_document(const KeyValueDocument& doc);
  static IndexModel load(const std::filesystem::path& path);
  // Resolves a shipped data file by name ("mgo_ln_e") inside data_directory()/dispersion.
  static IndexModel builtin(std::string_view name);

  // Throws DomainError naming lambda outside the valid band, at a pole, or where n^2 <= 0.
  double refractive_index(double lambda_nm) const;

  Kind kind() const noexcept { return kind_; }
  double constant_index() const noexcept { return constant_; }
  double offset() const noexcept { return offset_; }
  const std::vector<SellmeierTerm>& terms() const noexcept { return terms_; }
  double valid_from_nm() const noexcept { return valid_from_nm_; }
  double valid_to_nm() const noexcept { return valid_to_nm_; }

  // Where the model came from: "constant", a builtin name, or a file path.
  const std::string& source() const noexcept { return source_; }
  void set_source(std::string source) { source_ = std::move(source); }

 private:
  Kind kind_ = Kind::constant;
  double constant_ = 1.0;
  double offset_ = 1.0;
  std::vector<SellmeierTerm> terms_;
  double valid_from_nm_ = 0.0;
  double valid_to_nm_ = 0.0;
  std::string source_ = "constant";
};

// k = 2 pi n(lambda) / lambda in rad/um.
double wavevector(double lambda_nm, const IndexModel& model);

// BIPHOTON_DATA_DIR if set, else the build-tree data directory, else the install location.
std::filesystem::path data_directory();

}  // namespace biphoton
