#include <doctest.h>

#include "approx.hpp"

#include <algorithm>

#include "biphoton/config.hpp"
#include "biphoton/error.hpp"
#include "biphoton/keyvalue.hpp"

using namespace biphoton;

namespace {

const char* kMinimal =
    "[crystal]\nlength_um = 6.7\n[pump]\nwaist_um = 60\nwavelength_nm = 532\n"
    "[signal]\nwavelength_nm = 797\n[idler]\nwavelength_nm = 1600\n";

std::vector<ConfigIssue> issues_of(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool has_issue(const std::vector<ConfigIssue>& issues, const std::string& key) {
  return std::any_of(issues.begin(), issues.end(), [&](const auto& i) { return i.key == key; });
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("minimal config gets documented defaults") {
    const auto c = parse_config(kMinimal);
    CHECK(c.setup.length_um == 6.7);
    CHECK(c.setup.waist_um == 60.0);
    CHECK(c.setup.pump_nm == 532.0);
    CHECK(c.setup.signal_nm == 797.0);
    CHECK(c.setup.idler_nm == 1600.0);
    CHECK(c.dispersion == "mgo_ln_e");
    CHECK(c.setup.index_model.kind() == IndexModel::Kind::sellmeier);
    CHECK(c.setup.refraction);
    CHECK(c.setup.phasematch_exponent == 1);
    CHECK(c.grid.n == 1025);
    CHECK(c.grid.theta_max_deg == 35.0);
    CHECK(c.convention.kind == WidthKind::fwhm);
    CHECK_FALSE(c.convention.slice_at.has_value());
    CHECK(c.counting.rng_seed == 42);
    CHECK(c.efficiency.detector_qe == 1.0);
    CHECK(c.output_dir == "out");
  }

  TEST_CASE("negative length names the key") {
    std::string text = kMinimal;
    text.replace(text.find("6.7"), 3, "-1");
    const auto issues = issues_of(text);
    REQUIRE(has_issue(issues, "crystal.length_um"));
    const auto it = std::find_if(issues.begin(), issues.end(), [](auto& i) { return i.key == "crystal.length_um"; });
    CHECK(it->line == 2);
  }

  TEST_CASE("duplicate key reports both locations") {
    try {
      (void)KeyValueDocument::parse("[a]\nx = 1\ny = 2\nx = 3\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      REQUIRE(e.issues().size() == 1);
      const auto& msg = e.issues()[0].message;
      CHECK(msg.find('2') != std::string::npos);
      CHECK(msg.find('4') != std::string::npos);
      CHECK(e.issues()[0].key == "a.x");
    }
  }

  TEST_CASE("every problem is reported, not just the first") {
    const auto issues = issues_of(
        "[crystal]\nlength_um = 0\ncolour = blue\n[pump]\nwaist_um = abc\nwavelength_nm = 532\n"
        "[signal]\nwavelength_nm = 797\n[efficiency]\ndetector_qe = 1.5\n");
    CHECK(has_issue(issues, "crystal.length_um"));
    CHECK(has_issue(issues, "crystal.colour"));
    CHECK(has_issue(issues, "pump.waist_um"));
    CHECK(has_issue(issues, "idler.wavelength_nm"));
    CHECK(has_issue(issues, "efficiency.detector_qe"));
    CHECK(issues.size() >= 5);
  }

  TEST_CASE("unknown keys are rejected") {
    CHECK(has_issue(issues_of(std::string("colour = 1\n") + kMinimal), "colour"));
  }

  TEST_CASE("missing required keys") {
    const auto issues = issues_of("[crystal]\nlength_um = 6.7\n");
    CHECK(has_issue(issues, "pump.waist_um"));
    CHECK(has_issue(issues, "pump.wavelength_nm"));
    CHECK(has_issue(issues, "signal.wavelength_nm"));
    CHECK(has_issue(issues, "idler.wavelength_nm"));
  }

  TEST_CASE("energy conservation and grid invariants are enforced") {
    std::string text = kMinimal;
    text.replace(text.find("1600"), 4, "1500");
    CHECK(has_issue(issues_of(text), "idler.wavelength_nm"));
    CHECK(has_issue(issues_of(std::string(kMinimal) + "[grid]\nn = 1024\n"), "grid.n"));
    CHECK(has_issue(issues_of(std::string(kMinimal) + "[grid]\ntheta_max_deg = 95\n"), "grid.theta_max_deg"));
    CHECK(has_issue(issues_of(std::string(kMinimal) + "[width]\nslice_deg = 50\n"), "width.slice_deg"));
    CHECK(has_issue(issues_of(std::string(kMinimal) + "[slit]\nwidth_deg = 0.01\n"), "slit.width_deg"));
  }

  TEST_CASE("round trip preserves every effective value") {
    const auto a = parse_config(std::string("seed = 9\n") + kMinimal +
                                "[width]\nkind = std_dev\nslice_deg = 1.5\n[set]\nseed_angles_deg = -2, 0.1, 3\n"
                                "mask_from_deg = -1\nmask_to_deg = 1\nnoise = true\n[crystal]\n");
    const auto text1 = serialize_config(a);
    const auto b = parse_config(text1);
    CHECK(serialize_config(b) == text1);
    CHECK(b.counting.rng_seed == 9);
    CHECK(b.convention.kind == WidthKind::std_dev);
    CHECK(*b.convention.slice_at == 1.5);
    CHECK(b.set.seed_angles_deg == std::vector<double>{-2, 0.1, 3});
    CHECK(b.set_noise);
    CHECK(config_hash(a) == config_hash(b));
  }

  TEST_CASE("hash ignores the output directory but not physics") {
    auto a = parse_config(kMinimal);
    auto b = a;
    b.output_dir = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.setup.length_um = 6.8;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash_hex(a).size() == 16);
  }

  TEST_CASE("number lists and ranges") {
    CHECK(parse_number_list("1, 2.5,3") == std::vector<double>{1, 2.5, 3});
    const auto r = parse_number_list("-1:1:0.5");
    REQUIRE(r.size() == 5);
    CHECK(r.front() == -1.0);
    CHECK(r.back() == rel(1.0));
    CHECK_THROWS_AS((void)parse_number_list("1:0:0.5"), ArgumentError);
    const auto tenths = parse_number_list("-10:10:0.1");
    REQUIRE(tenths.size() == 201);
    CHECK(tenths[23] == -7.7);
    CHECK(tenths[103] == 0.3);
    CHECK(tenths.back() == 10.0);
    CHECK(format_number(tenths[23]) == "-7.7");
  }

  TEST_CASE("shortest round-trip number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(6.7) == "6.7");
    CHECK(format_number(0.0) == "0");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  }
}
