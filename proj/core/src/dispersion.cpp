#include "biphoton/dispersion.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "biphoton/error.hpp"
#include "biphoton/keyvalue.hpp"

namespace biphoton {
namespace {

std::string nm_text(double lambda_nm) {
  std::ostringstream os;
  os << lambda_nm << " nm";
  return os.str();
}

}  // namespace

IndexModel IndexModel::constant(double n) {
  if (!(n > 0.0) || !std::isfinite(n)) throw ArgumentError("constant refractive index must be positive");
  IndexModel m;
  m.kind_ = Kind::constant;
  m.constant_ = n;
  m.source_ = "constant";
  return m;
}

IndexModel IndexModel::sellmeier(double offset, std::vector<SellmeierTerm> terms, double valid_from_nm,
                                 double valid_to_nm) {
  for (const auto& t : terms) {
    if (t.wavelength_power != 0 && t.wavelength_power != 2 && t.wavelength_power != 4) {
      throw ArgumentError("Sellmeier wavelength power must be 0, 2 or 4");
    }
  }
  if (valid_to_nm < valid_from_nm) throw ArgumentError("Sellmeier valid band is inverted");
  IndexModel m;
  m.kind_ = Kind::sellmeier;
  m.offset_ = offset;
  m.terms_ = std::move(terms);
  m.valid_from_nm_ = valid_from_nm;
  m.valid_to_nm_ = valid_to_nm;
  m.source_ = "sellmeier";
  return m;
}

IndexModel IndexModel::from_document(const KeyValueDocument& doc) {
  KeyValueReader r(doc);
  const auto kind = r.require("index.kind", r.text("index.kind"));
  IndexModel model;
  if (kind == "constant") {
    const auto n = r.require("index.n", r.number("index.n"));
    r.finish();
    return constant(*n);
  }
  if (kind && *kind != "sellmeier") r.issue("index.kind", "expected 'constant' or 'sellmeier'");
  const auto offset = r.require("index.offset", r.number("index.offset"));
  const auto b = r.require("index.numerators", r.number_list("index.numerators"));
  const auto c = r.require("index.poles_um2", r.number_list("index.poles_um2"));
  const auto p = r.require("index.wavelength_powers", r.number_list("index.wavelength_powers"));
  const auto from = r.number("index.valid_from_nm").value_or(0.0);
  const auto to = r.number("index.valid_to_nm").value_or(0.0);
  if (b && c && p && (b->size() != c->size() || b->size() != p->size())) {
    r.issue("index.numerators", "numerators, poles_um2 and wavelength_powers must have equal length");
  }
  r.finish();
  std::vector<SellmeierTerm> terms;
  for (std::size_t j = 0; j < b->size(); ++j) {
    terms.push_back({(*b)[j], (*c)[j], static_cast<int>(std::lround((*p)[j]))});
  }
  return sellmeier(*offset, std::move(terms), from, to);
}

IndexModel IndexModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dispersion file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto model = from_document(KeyValueDocument::parse(buffer.str()));
  model.source_ = path.string();
  return model;
}

IndexModel IndexModel::builtin(std::string_view name) {
  auto model = load(data_directory() / "dispersion" / (std::string(name) + ".ini"));
  model.source_ = std::string(name);
  return model;
}

double IndexModel::refractive_index(double lambda_nm) const {
  if (!(lambda_nm > 0.0) || !std::isfinite(lambda_nm)) {
    throw DomainError("wavelength must be positive, got " + nm_text(lambda_nm));
  }
  if (kind_ == Kind::constant) return constant_;

  if (valid_to_nm_ > 0.0 && (lambda_nm < valid_from_nm_ || lambda_nm > valid_to_nm_)) {
    throw DomainError("dispersion model not valid at " + nm_text(lambda_nm));
  }
  const double l2 = (lambda_nm * 1e-3) * (lambda_nm * 1e-3);
  double n2 = offset_;
  for (const auto& t : terms_) {
    const double denom = l2 - t.pole_um2;
    if (std::abs(denom) < 1e-9 * std::max(1.0, std::abs(t.pole_um2))) {
      throw DomainError("Sellmeier pole at " + nm_text(lambda_nm));
    }
    n2 += t.numerator * std::pow(l2, t.wavelength_power / 2) / denom;
  }
  if (!(n2 > 0.0)) throw DomainError("Sellmeier model gives n^2 <= 0 at " + nm_text(lambda_nm));
  return std::sqrt(n2);
}

double wavevector(double lambda_nm, const IndexModel& model) {
  const double n = model.refractive_index(lambda_nm);
  return 2.0 * std::numbers::pi * n / (lambda_nm * 1e-3);
}

std::filesystem::path data_directory() {
  if (const char* env = std::getenv("BIPHOTON_DATA_DIR"); env && *env) return env;
#ifdef BIPHOTON_BUILD_DATA_DIR
  if (std::filesystem::exists(BIPHOTON_BUILD_DATA_DIR)) return BIPHOTON_BUILD_DATA_DIR;
#endif
#ifdef BIPHOTON_INSTALL_DATA_DIR
  return BIPHOTON_INSTALL_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace biphoton
